"""
Report assembly for the command line.

Indices in reports are 1-based. Every No decision is re-checked from its
certificate before it is written out.
"""

import json
from dataclasses import asdict
from typing import Optional

from . import __version__
from .config import Settings
from .errors import WitnessVerificationError
from .frames import Frame
from .io import format_entry, vector_to_list
from .linalg import Matrix, format_scalar, rank
from .spark import Decision, Outcome, PartitionWitness, SubsetWitness
from .wpr import (
    AmbiguityPair,
    Classification,
    measurement_signs,
    weakly_same_phase,
)

TOOL_NAME = "framelab"


def _one_based(indices) -> list:
    return [i + 1 for i in indices]


def witness_to_dict(witness) -> Optional[dict]:
    if witness is None:
        return None
    if isinstance(witness, SubsetWitness):
        return {
            "kind": "dependent-subset",
            "indices": _one_based(witness.indices),
            "rank": witness.rank,
        }
    if isinstance(witness, PartitionWitness):
        return {
            "kind": "partition",
            "subset": _one_based(witness.subset),
            "complement": _one_based(witness.complement),
            "rank_subset": witness.rank_subset,
            "rank_complement": witness.rank_complement,
            "null_subset": [vector_to_list(v) for v in witness.null_subset],
            "null_complement": [
                vector_to_list(v) for v in witness.null_complement
            ],
        }
    if isinstance(witness, AmbiguityPair):
        conflict = weakly_same_phase(witness.x, witness.y).conflict
        return {
            "kind": "ambiguity-pair",
            "x": vector_to_list(witness.x),
            "y": vector_to_list(witness.y),
            "signs": list(witness.signs),
            "partition": _one_based(witness.partition),
            "conflict": _one_based(conflict) if conflict else None,
        }
    raise TypeError(f"unknown witness {type(witness).__name__}")


def _side_rank(frame: Frame, indices) -> int:
    if not indices:
        return 0
    return rank(Matrix(frame.subset(indices)))


def _check_witness(frame: Frame, witness) -> bool:
    if isinstance(witness, SubsetWitness):
        return (
            len(witness.indices) == frame.n
            and _side_rank(frame, witness.indices) < frame.n
        )
    if isinstance(witness, PartitionWitness):
        covered = sorted(witness.subset + witness.complement)
        return (
            covered == list(range(frame.m))
            and _side_rank(frame, witness.subset) < frame.n
            and _side_rank(frame, witness.complement) < frame.n
        )
    if isinstance(witness, AmbiguityPair):
        signs = measurement_signs(frame, witness.x, witness.y)
        return (
            signs is not None
            and not weakly_same_phase(witness.x, witness.y).related
        )
    return False


def verify_decision(frame: Frame, decision: Decision) -> bool:
    """
    Re-check the certificate of a No decision against the frame.

    Raises:
        WitnessVerificationError: When the certificate is missing or does
                                  not hold.
    """
    if decision.outcome is not Outcome.NO:
        return False
    if decision.witness is None:
        raise WitnessVerificationError(
            f"no certificate for rule {decision.rule.value}"
        )
    if not _check_witness(frame, decision.witness):
        raise WitnessVerificationError(
            f"certificate for rule {decision.rule.value} does not hold"
        )
    return True


def decision_result(
    check: str,
    frame: Frame,
    decision: Decision,
    seconds: Optional[float] = None,
) -> dict:
    """
    Verified result entry for one decision
    """
    result = {
        "check": check,
        "outcome": decision.outcome.value,
        "rule": decision.rule.value,
        "rule_text": decision.rule.description,
        "witness": witness_to_dict(decision.witness),
        "verified": verify_decision(frame, decision),
    }
    if decision.detail:
        result["detail"] = decision.detail
    if seconds is not None:
        result["seconds"] = round(seconds, 6)
    return result


def classification_to_dict(classification: Classification) -> dict:
    a = classification.a
    return {
        "case": classification.case,
        "a": format_entry(a) if classification.exact_a else float(a),
        "a_exact": classification.exact_a,
        "only_x": _one_based(classification.only_x),
        "only_y": _one_based(classification.only_y),
        "both_zero": _one_based(classification.both_zero),
        "ratio": _one_based(classification.ratio),
        "inverse_ratio": _one_based(classification.inverse_ratio),
    }


def build_report(
    command: str,
    results: list,
    settings: Settings,
    source: Optional[dict] = None,
) -> dict:
    """
    Assemble a report

    Args:
        command (str): The subcommand that ran, e.g. "decide wpr".
        results (list): Result entries (dicts with a "check" key).
        settings (Settings): Echoed as the run configuration.
        source (dict): Input description (path, digest, m, n, backend).
    """
    return {
        "tool": {"name": TOOL_NAME, "version": __version__},
        "command": command,
        "input": source,
        "config": asdict(settings),
        "results": results,
    }


def frame_source(frame: Frame, path: str = None, digest: str = None) -> dict:
    return {
        "path": path,
        "digest": digest,
        "m": frame.m,
        "n": frame.n,
        "backend": frame.backend.name,
    }


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def _render_value(value) -> str:
    if isinstance(value, float):
        return format_scalar(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_render_value(v) for v in value) + "]"
    return str(value)


def render_text(report: dict) -> str:
    """
    Human-readable form of a report
    """
    lines = [f"{report['tool']['name']} {report['tool']['version']}"]
    lines.append(f"command: {report['command']}")
    source = report.get("input")
    if source:
        lines.append(
            f"input: {source.get('path') or '-'} "
            f"(m={source['m']}, n={source['n']}, {source['backend']})"
        )
    for result in report["results"]:
        lines.append("")
        lines.append(f"[{result['check']}]")
        for key, value in result.items():
            if key == "check":
                continue
            if isinstance(value, dict):
                lines.append(f"  {key}:")
                for inner, item in value.items():
                    lines.append(f"    {inner}: {_render_value(item)}")
            else:
                lines.append(f"  {key}: {_render_value(value)}")
    return "\n".join(lines) + "\n"
