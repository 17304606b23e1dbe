class InvalidLatticeError(ValueError):
    """Lattice parameters are inconsistent (divisibility or redundancy)."""


class NotAFrameError(ValueError):
    """The Gabor system at hand is not (numerically) a frame."""
