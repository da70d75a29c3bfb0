"""Lossless JSON forms for every report kind.

Rationals are emitted as decimal strings under num/den so no consumer is
tempted to round them; interval endpoints use their exact dyadic decimal
expansion. Every serializer here has an inverse, and parse(serialize(x))
reconstructs x exactly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .arith import Dyadic, Ordering, RealInterval
from .dominance import PowerComparison
from .search import (
    ChainReport,
    GapRecord,
    RatioTailCertificate,
    SearchReport,
    TailCertificate,
    TwinTheoremReport,
)


def fraction_to_json(value: Fraction) -> dict[str, str]:
    return {"num": str(value.numerator), "den": str(value.denominator)}


def fraction_from_json(data: dict[str, str]) -> Fraction:
    return Fraction(int(data["num"]), int(data["den"]))


def interval_to_json(value: RealInterval) -> dict[str, Any]:
    return {
        "lo": value.lo.decimal(),
        "hi": value.hi.decimal(),
        "bits": value.precision_bits,
    }


def interval_from_json(data: dict[str, Any]) -> RealInterval:
    return RealInterval(
        Dyadic.from_decimal(data["lo"]),
        Dyadic.from_decimal(data["hi"]),
        int(data["bits"]),
    )


def comparison_to_json(value: PowerComparison) -> dict[str, Any]:
    return {
        "p": value.p,
        "a": value.a,
        "q": value.q,
        "b": value.b,
        "outcome": value.outcome.name,
        "method": value.method,
        "precision_bits": value.precision_bits,
    }


def comparison_from_json(data: dict[str, Any]) -> PowerComparison:
    return PowerComparison(
        p=int(data["p"]),
        a=int(data["a"]),
        q=int(data["q"]),
        b=int(data["b"]),
        outcome=Ordering[data["outcome"]],
        method=data["method"],
        precision_bits=None if data["precision_bits"] is None else int(data["precision_bits"]),
    )


def certificate_to_json(cert: TailCertificate | RatioTailCertificate) -> dict[str, Any]:
    if isinstance(cert, TailCertificate):
        return {
            "kind": "tail-n0",
            "p": cert.p,
            "threshold": cert.threshold,
            "mode": cert.mode,
            "h_enclosure": interval_to_json(cert.h_enclosure),
            "block_checked": cert.block_checked,
        }
    return {
        "kind": "ratio-tail",
        "p": cert.p,
        "n_tilde": cert.n_tilde,
        "bound": interval_to_json(cert.bound),
    }


def certificate_from_json(data: dict[str, Any]) -> TailCertificate | RatioTailCertificate:
    if data["kind"] == "tail-n0":
        return TailCertificate(
            p=int(data["p"]),
            threshold=int(data["threshold"]),
            mode=data["mode"],
            h_enclosure=interval_from_json(data["h_enclosure"]),
            block_checked=int(data["block_checked"]),
        )
    if data["kind"] == "ratio-tail":
        return RatioTailCertificate(
            p=int(data["p"]),
            n_tilde=int(data["n_tilde"]),
            bound=interval_from_json(data["bound"]),
        )
    raise ValueError(f"unknown certificate kind {data.get('kind')!r}")


def search_report_to_json(report: SearchReport) -> dict[str, Any]:
    if isinstance(report.value, tuple):
        argmin, minimum = report.value
        value: Any = {"argmin": argmin, "min": fraction_to_json(minimum)}
    else:
        value = report.value
    return {
        "p": report.p,
        "quantity": report.quantity,
        "value": value,
        "scan_range": list(report.scan_range),
        "certificate": certificate_to_json(report.certificate),
        "violations": list(report.violations),
    }


def search_report_from_json(data: dict[str, Any]) -> SearchReport:
    raw = data["value"]
    if isinstance(raw, dict):
        value: Any = (int(raw["argmin"]), fraction_from_json(raw["min"]))
    else:
        value = int(raw)
    return SearchReport(
        p=int(data["p"]),
        quantity=data["quantity"],
        value=value,
        scan_range=(int(data["scan_range"][0]), int(data["scan_range"][1])),
        certificate=certificate_from_json(data["certificate"]),
        violations=tuple(int(v) for v in data["violations"]),
    )


def gap_record_to_json(record: GapRecord) -> dict[str, Any]:
    return {
        "gap": record.gap,
        "samples": [list(pair) for pair in record.samples],
        "fitted_poly": None
        if record.fitted_poly is None
        else [fraction_to_json(c) for c in record.fitted_poly],
        "validated_through": record.validated_through,
    }


def gap_record_from_json(data: dict[str, Any]) -> GapRecord:
    poly = data["fitted_poly"]
    return GapRecord(
        gap=int(data["gap"]),
        samples=tuple((int(p), int(v)) for p, v in data["samples"]),
        fitted_poly=None if poly is None else tuple(fraction_from_json(c) for c in poly),
        validated_through=int(data["validated_through"]),
    )


def twin_report_to_json(report: TwinTheoremReport) -> dict[str, Any]:
    return {
        "p": report.p,
        "k": report.k,
        "exponent_p": report.exponent_p,
        "exponent_q": report.exponent_q,
        "expected_exponent": report.expected_exponent,
        "n_min": report.n_min_value,
        "formula_value": report.formula_value,
        "global_min": {
            "argmin": report.global_min_argmin,
            "min": fraction_to_json(report.global_min_value),
        },
        "threshold": interval_to_json(report.threshold_enclosure),
        "checks": {
            "boundary_exponents": report.boundary_exponents_ok,
            "dominance_fails_at_k": report.dominance_fails_at_k,
            "n_min_matches_formula": report.n_min_matches_formula,
            "threshold_below_min": report.threshold_below_min,
        },
        "verdict": report.verdict,
    }


def twin_report_from_json(data: dict[str, Any]) -> TwinTheoremReport:
    checks = data["checks"]
    return TwinTheoremReport(
        p=int(data["p"]),
        k=int(data["k"]),
        exponent_p=int(data["exponent_p"]),
        exponent_q=int(data["exponent_q"]),
        expected_exponent=int(data["expected_exponent"]),
        boundary_exponents_ok=bool(checks["boundary_exponents"]),
        dominance_fails_at_k=bool(checks["dominance_fails_at_k"]),
        n_min_value=int(data["n_min"]),
        formula_value=int(data["formula_value"]),
        n_min_matches_formula=bool(checks["n_min_matches_formula"]),
        global_min_argmin=int(data["global_min"]["argmin"]),
        global_min_value=fraction_from_json(data["global_min"]["min"]),
        threshold_enclosure=interval_from_json(data["threshold"]),
        threshold_below_min=bool(checks["threshold_below_min"]),
        verdict=bool(data["verdict"]),
    )


def chain_report_to_json(report: ChainReport) -> dict[str, Any]:
    return {
        "n": report.n,
        "m": report.m,
        "links": [comparison_to_json(link) for link in report.links],
        "holds": report.holds,
    }


def chain_report_from_json(data: dict[str, Any]) -> ChainReport:
    return ChainReport(
        n=int(data["n"]),
        m=int(data["m"]),
        links=tuple(comparison_from_json(link) for link in data["links"]),
        holds=bool(data["holds"]),
    )
