"""Exception hierarchy shared by all modules."""


class DworkHGError(ValueError):
    """Base class for every error raised by :mod:`dworkhg`."""


class NonIntegral(DworkHGError):
    """A rational argument has a denominator divisible by p."""


class UnitRequired(DworkHGError):
    """A p-adic unit was expected."""


class NoStabilization(DworkHGError):
    """The limit defining psi_tilde did not stabilize (implementation bug)."""


class NotOrdinary(DworkHGError):
    """p divides the trace, so there is no unit root."""


class NotInvertible(DworkHGError):
    """Series with non-unit constant term cannot be inverted."""


class BadFrobeniusConstant(DworkHGError):
    """Frobenius constant c is not congruent to 1 mod p."""


class NonzeroConstantTerm(DworkHGError):
    """dlog integral requested for a series with nonzero constant term."""


class TruncationExceeded(DworkHGError):
    """Requested more coefficients than the series carries."""


class PrecisionWindowExceeded(DworkHGError):
    """Requested degree lies outside the window justified by the congruence."""


class BadFiber(DworkHGError):
    """Evaluation point is congruent to 0 or 1 mod p."""


class BadHasse(DworkHGError):
    """The Hasse polynomial vanishes mod p at the evaluation point."""


class SmallPrime(DworkHGError):
    """The prime is too small for the requested construction."""


class OrbitMismatch(DworkHGError):
    """Frobenius power is not a multiple of the Dwork orbit length."""


class BudgetExceeded(DworkHGError):
    """Brute-force enumeration would exceed the configured budget."""


class BadReduction(DworkHGError):
    """The curve has bad reduction at p."""


class NonIntegralPrefactor(DworkHGError):
    """Eta quotient whose leading q-power is not an integer."""


class NotModular(DworkHGError):
    """Parameter is not in the list of modular K3 parameters."""
