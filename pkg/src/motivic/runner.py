"""Execute parsed commands and package the results as output records."""

from dataclasses import dataclass, field
from typing import Any, List, Optional, Sequence

from . import dsl
from .equivalence import (
    birational_difference, describe_witness, l_equivalent, rationality_witness,
    stable_birational_class,
)
from .errors import ComputationError, NonIntegralFitError, ParseError
from .normalize import class_of
from .oracle import DEFAULT_BUDGET, count_expression, fit_polynomial
from .ring import MotivicClass
from .varieties import PointConfiguration, VarietyExpr, blowup_p3_points, to_source

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_COMPUTE = 3
EXIT_MISMATCH = 4

DEMO_DIMENSION = 3


@dataclass
class OutputRecord:
    command: str
    input: str
    result: Any = None
    status: str = "ok"
    diagnostics: List[str] = field(default_factory=list)
    exit_code: int = EXIT_OK
    subrecords: List["OutputRecord"] = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "input": self.input,
            "result": self.result,
            "status": self.status,
            "diagnostics": list(self.diagnostics),
        }

    def fail(self, code: int, message: str) -> "OutputRecord":
        self.status = "error"
        self.exit_code = max(self.exit_code, code)
        self.diagnostics.append(message)
        return self


OUTPUT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["command", "input", "result", "status", "diagnostics"],
    "additionalProperties": False,
    "properties": {
        "command": {"type": "string"},
        "input": {"type": "string"},
        "result": {},
        "status": {"enum": ["ok", "error"]},
        "diagnostics": {"type": "array", "items": {"type": "string"}},
    },
    "if": {"properties": {"status": {"const": "error"}}},
    "then": {"properties": {"diagnostics": {"minItems": 1}}},
}


def _class_json(c: MotivicClass) -> dict:
    return {"text": c.to_text(), "json": c.to_json()}


class Session:
    """Runs commands with a fixed enumeration budget and seed."""

    def __init__(self, budget: int = DEFAULT_BUDGET, seed: int = 0):
        self.budget = budget
        self.seed = seed

    def execute(self, cmd: dsl.Command) -> OutputRecord:
        name = {
            dsl.Normalize: "normalize", dsl.Equiv: "equiv", dsl.ModL: "modl",
            dsl.Rationality: "rational", dsl.BiratDiff: "birat", dsl.Count: "count",
            dsl.Verify: "verify", dsl.DemoLesieutre: "demo",
        }[type(cmd)]
        record = OutputRecord(name, cmd.source or _describe(cmd))
        try:
            record.result = getattr(self, f"_{name}")(cmd, record)
        except ComputationError as exc:
            record.fail(EXIT_COMPUTE, f"computation error: {exc}")
        return record

    def _normalize(self, cmd, record):
        return _class_json(class_of(cmd.expr))

    def _equiv(self, cmd, record):
        return l_equivalent(class_of(cmd.left), class_of(cmd.right)).to_json()

    def _modl(self, cmd, record):
        c = class_of(cmd.expr)
        return {"class": c.to_text(), "mod_L": stable_birational_class(c).to_text()}

    def _rational(self, cmd, record):
        c = class_of(cmd.expr)
        witness = rationality_witness(c, cmd.d)
        out = {"class": c.to_text(), "dim": cmd.d, "witness": None if witness is None else witness.to_text()}
        if witness is not None:
            out["reconstructs"] = MotivicClass.projective(cmd.d) + MotivicClass.lefschetz() * witness == c
            out["shape"] = describe_witness(witness, cmd.d)
        return out

    def _birat(self, cmd, record):
        a, b = class_of(cmd.left), class_of(cmd.right)
        m = birational_difference(a, b)
        return {"difference": (a - b).to_text(), "witness": None if m is None else m.to_text()}

    def _count(self, cmd, record):
        return count_expression(cmd.expr, cmd.p, self.budget).to_json()

    def _verify(self, cmd, record):
        return self.verify(cmd.expr, cmd.primes, record)

    def _demo(self, cmd, record):
        return self.demo_lesieutre(cmd.points, record)

    def verify(self, expr: VarietyExpr, primes: Sequence[int], record: OutputRecord) -> dict:
        c = class_of(expr)
        if not c.is_atom_free():
            raise ComputationError(f"class {c} involves atoms; nothing to count")
        poly = c.to_lpolynomial()
        samples = [count_expression(expr, q, self.budget) for q in primes]
        rows = [{"q": s.q, "count": s.count, "expected": poly.evaluate(s.q)} for s in samples]
        pointwise = all(r["count"] == r["expected"] for r in rows)
        distinct = len(set(primes))
        determined = distinct > poly.degree
        out = {"class": c.to_text(), "samples": rows, "fit": None}
        fit_ok = True
        if distinct >= 2:
            try:
                fit = fit_polynomial(samples)
            except NonIntegralFitError as exc:
                fit_ok = not determined
                out["note"] = f"fit failed: {exc}"
            else:
                out["fit"] = fit.to_text()
                fit_ok = fit == poly or not determined
        if not determined:
            out["note"] = f"{distinct} prime(s) cannot pin down a degree-{poly.degree} class; compared pointwise"
        out["verdict"] = "MATCH" if pointwise and fit_ok else "MISMATCH"
        if out["verdict"] == "MISMATCH":
            record.fail(EXIT_MISMATCH, f"verification mismatch: oracle counts {[r['count'] for r in rows]} "
                                       f"disagree with {c} (expected {[r['expected'] for r in rows]})")
        return out

    def demo_lesieutre(self, m: int, record: OutputRecord) -> dict:
        """Blow up P^3 at m points for two configurations and compare everything."""
        if m < 1:
            raise ValueError("the demo needs at least one point")
        first = PointConfiguration(m, tuple(f"p{i + 1}" for i in range(m)))
        second = PointConfiguration(m, tuple(f"q{i + 1}" for i in range(m)))
        expr_a, expr_b = blowup_p3_points(first), blowup_p3_points(second)
        class_a, class_b = class_of(expr_a), class_of(expr_b)
        report = l_equivalent(class_a, class_b)
        witness = rationality_witness(class_a, DEMO_DIMENSION)

        # F_2 and F_3 unless P^3 has too few rational points for m centers.
        primes = [q for q in (2, 3, 5, 7, 11, 13) if (q ** 4 - 1) // (q - 1) >= m][:2]
        oracle = []
        agree = True
        for q in primes:
            lex = count_expression(expr_a, q, self.budget).count
            seeded = count_expression(expr_b, q, self.budget, configuration=self.seed).count
            expected = class_a.evaluate(q)
            agree &= lex == seeded == expected
            oracle.append({"q": q, "count_first_points": lex, "count_seeded_points": seeded, "expected": expected})

        same = class_a == class_b and report.verdict
        out = {
            "expression": to_source(expr_a),
            "class": class_a.to_text(),
            "class_second_configuration": class_b.to_text(),
            "equal_across_configurations": same,
            "l_equivalent": report.verdict,
            "mod_L": stable_birational_class(class_a).to_text(),
            "rationality_witness": None if witness is None else witness.to_text(),
            "witness_shape": None if witness is None else describe_witness(witness, DEMO_DIMENSION),
            "oracle": oracle,
            "oracle_agrees": agree,
        }
        if not (same and agree):
            record.fail(EXIT_MISMATCH, "verification mismatch: configurations or oracle counts disagree")
        return out

    def run_script(self, text, name: str) -> OutputRecord:
        record = OutputRecord("run", name, result=[])
        try:
            program = dsl.parse_script(text)
        except ParseError as exc:
            return record.fail(EXIT_PARSE, f"parse error at {exc.line}:{exc.col}: {exc.message}")
        subrecords = []
        for cmd in program.commands:
            sub = self.execute(cmd)
            subrecords.append(sub)
            if sub.status == "error":
                record.fail(sub.exit_code, f"{sub.command} {sub.input}: {sub.diagnostics[0]}")
                break
        record.result = [r.to_json() for r in subrecords]
        record.subrecords = subrecords
        return record


def _describe(cmd) -> str:
    if isinstance(cmd, dsl.DemoLesieutre):
        return f"lesieutre points={cmd.points}"
    exprs = [getattr(cmd, a) for a in ("expr", "left", "right") if hasattr(cmd, a)]
    return "; ".join(to_source(e) for e in exprs)


def render_plain(record: OutputRecord) -> str:
    """Stable human-readable rendering of a record."""
    if record.command == "run":
        blocks = []
        for sub in record.subrecords:
            blocks.append(f"> {sub.input}\n{render_plain(sub)}")
        return "\n".join(blocks)
    result = record.result
    if result is None:
        return ""
    if record.command == "normalize":
        return result["text"]
    if record.command == "count":
        return str(result["count"])
    return "\n".join(_plain_lines(result))


def _plain_lines(value, indent=""):
    lines = []
    for key, item in value.items():
        if isinstance(item, list) and item and isinstance(item[0], dict):
            lines.append(f"{indent}{key}:")
            for row in item:
                lines.append(f"{indent}  " + ", ".join(f"{k}={_scalar(v)}" for k, v in row.items()))
        elif isinstance(item, dict):
            lines.append(f"{indent}{key}:")
            lines.extend(_plain_lines(item, indent + "  "))
        else:
            lines.append(f"{indent}{key}: {_scalar(item)}")
    return lines


def _scalar(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)
