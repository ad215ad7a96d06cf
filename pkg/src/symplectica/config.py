"""Default numerical tolerances.

Residual norms are induced infinity norms (maximum absolute row sum).
Relative tolerances are multiplied by the infinity norm of the input.
"""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    sym: float = 1e-12  # relative symmetry check
    orth: float = 1e-10
    rec: float = 1e-9  # relative reconstruction residual
    symp: float = 1e-10
    phys: float = 1e-9  # symplectic eigenvalues may dip this far below 1
    pure: float = 1e-9
    schmidt: float = 1e-7

    def override(self, value):
        """Return a copy with every residual tolerance set to ``value``.

        The symmetry tolerance is left alone; it only guards against
        malformed input.
        """
        return replace(self, orth=value, rec=value, symp=value, phys=value,
                       pure=value, schmidt=value)


DEFAULT = Tolerances()
