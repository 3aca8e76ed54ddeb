"""
Runtime settings shared by the library and the command line
"""

import os
from dataclasses import dataclass, replace

SEED_ENV_VAR = "FRAMELAB_SEED"


@dataclass(frozen=True)
class Settings:
    """
    Tunable limits and defaults

    Args:
        tolerance (float): Relative zero tolerance of the float backend.
        enumeration_cap (int): Largest m for which partitions are enumerated.
        seed (int): Default seed of every randomized routine.
        falsification_trials (int): Samples drawn per high-dimensional
                                    partition by the weak phase sampler.
        density_trials (int): Perturbed frames drawn per epsilon.
        rational_denominator (int): Largest denominator used when floats
                                    are snapped to rationals.
        max_unconditional_dimension (int): Largest n for the 2^n sign
                                           enumeration.
        projection_max_n (int): Largest dimension for the projection family.
        projection_max_m (int): Largest size of the projection family.
        retry_limit (int): Attempts before a constructor gives up.
    """

    tolerance: float = 1e-9
    enumeration_cap: int = 24
    seed: int = 0
    falsification_trials: int = 10_000
    density_trials: int = 200
    rational_denominator: int = 10**6
    max_unconditional_dimension: int = 20
    projection_max_n: int = 8
    projection_max_m: int = 10
    retry_limit: int = 100

    @classmethod
    def from_env(cls) -> "Settings":
        """
        Build settings, taking the default seed from FRAMELAB_SEED if set
        """
        raw = os.environ.get(SEED_ENV_VAR)
        if raw is None or not raw.strip():
            return cls()
        try:
            return cls(seed=int(raw))
        except ValueError as exc:
            raise ValueError(
                f"{SEED_ENV_VAR} must be an integer, got {raw!r}"
            ) from exc

    def override(self, **changes) -> "Settings":
        """
        Return a copy with the non-None values of `changes` applied
        """
        return replace(
            self, **{k: v for k, v in changes.items() if v is not None}
        )


DEFAULT_SETTINGS = Settings()
