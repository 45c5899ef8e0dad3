"""Machine-readable outcome of a verification suite."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Violation:
    """One failed trial: the sampled inputs (canonically rendered, so they
    can be fed back through the DSL) and the nonzero defect."""

    trial: int
    inputs: dict[str, str]
    defect: str

    def to_dict(self) -> dict:
        return {"trial": self.trial, "inputs": dict(self.inputs), "defect": self.defect}


@dataclass(frozen=True)
class VerificationReport:
    """Deterministic result of running one property suite.

    ``passed`` is derived, never stored, so it cannot drift out of sync
    with the violation list.
    """

    suite: str
    structure: str
    variant: str
    trials: int
    seed: int
    violations: tuple[Violation, ...] = ()
    observations: dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "structure": self.structure,
            "variant": self.variant,
            "trials": self.trials,
            "seed": self.seed,
            "passed": self.passed,
            "violations": [v.to_dict() for v in self.violations],
            "observations": dict(self.observations),
        }

    def summary(self) -> str:
        return (
            f"suite={self.suite} structure=[{self.structure}] variant={self.variant} "
            f"trials={self.trials} seed={self.seed} "
            f"{'PASS' if self.passed else f'FAIL ({len(self.violations)} violations)'}"
        )
