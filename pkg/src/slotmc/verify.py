"""Self-check suite: closed forms against enumeration plus structural invariants."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence

from .chain import fundamental_matrix
from .config import SystemConfig, parse_epsilon
from .model import apply_channel_error, build_transition_matrix
from .oracle import ENUMERATION_BUDGET, BudgetExceededError, enumerate_error_transition, enumerate_transition

DEFAULT_EPSILONS = (Fraction(1, 10), Fraction(1, 2))


@dataclass
class VerifyReport:
    passed: int = 0
    failures: List[str] = field(default_factory=list)
    counts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def check(self, name: str, condition: bool, detail: str) -> None:
        self.counts[name] = self.counts.get(name, 0) + 1
        if condition:
            self.passed += 1
        else:
            self.failures.append(f"{name}: {detail}")


def run_checks(max_slots: int = 6, epsilons: Sequence = DEFAULT_EPSILONS, inject_fault: bool = False) -> VerifyReport:
    """Run every check for B <= ``max_slots``.

    ``inject_fault`` perturbs the closed-form rows before comparison, as a
    negative control that must make the report fail.
    """
    if max_slots < 1:
        raise ValueError("max_slots must be >= 1")
    if max_slots ** max_slots > ENUMERATION_BUDGET:
        raise BudgetExceededError(
            f"max B = {max_slots} needs {max_slots}^{max_slots} outcomes, over the budget of {ENUMERATION_BUDGET}"
        )
    eps_list = [parse_epsilon(e) for e in epsilons]
    if not all(isinstance(e, Fraction) for e in eps_list):
        raise ValueError("verification needs exact rational epsilons")
    report = VerifyReport()
    for b in range(1, max_slots + 1):
        for n in range(1, b + 1):
            ideal = build_transition_matrix(SystemConfig(b, n))
            rows = [list(r) for r in ideal.entries]
            if inject_fault:
                bump = Fraction(1, b ** n + 1)
                rows[0][0] += bump
                rows[0][-1] -= bump
            tag = f"B={b} N={n}"
            for d in range(n):
                oracle = enumerate_transition(b, n, d)
                report.check("oracle-equivalence", rows[d] == list(oracle.probs), f"{tag} d={d}")
                report.check("nonnegative", all(p >= 0 for p in rows[d]), f"{tag} d={d}")
                report.check("row-sum", sum(rows[d]) == 1, f"{tag} d={d}")
            if n >= 2:
                report.check("no-lone-collision", rows[0][n - 1] == 0, f"{tag} p(0,N-1)={rows[0][n - 1]}")
            report.check("absorbing-row", rows[n] == [0] * n + [1], tag)
            try:
                fundamental_matrix(ideal)
                report.check("fundamental-inverse", True, tag)
            except ArithmeticError as exc:
                report.check("fundamental-inverse", False, f"{tag}: {exc}")
            for eps in eps_list:
                noisy = apply_channel_error(ideal, eps)
                for d in range(n):
                    oracle = enumerate_error_transition(b, n, d, eps)
                    report.check("error-oracle-equivalence", list(noisy.row(d)) == list(oracle.probs),
                                 f"{tag} eps={eps} d={d}")
                    report.check("error-row-sum", sum(noisy.row(d)) == 1, f"{tag} eps={eps} d={d}")
    return report
