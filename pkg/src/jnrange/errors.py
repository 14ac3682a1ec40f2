class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class NotHermitianError(ValueError):
    """A matrix required to be Hermitian is not, within tolerance."""


class ConvergenceError(RuntimeError):
    """The Jacobi eigensolver hit its sweep cap."""


class HypothesisError(ValueError):
    """A verifier was asked to test a statement outside its hypothesis."""
