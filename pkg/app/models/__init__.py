"""Domain models."""
from app.models.cone import RationalCone, HPolyhedron, Vector
from app.models.variety import AffineToricVariety, FanRefinement, DivisorialValuation
from app.models.divisor import TWeilDivisor, MonomialFractionalIdeal, QCartierData
from app.models.pair import (
    PairSpec, PairTerm, BoundarySpec, StabilizationCertificate, AdjointSequenceCheck, Body
)
from app.models.classification import (
    Classification, IntersectionData, LcCenter, Witness, LogLevel, CanLevel, SurfaceLevel
)
from app.models.document import ProblemDocument, ResultDocument

__all__ = [
    # Lattice geometry
    'RationalCone', 'HPolyhedron', 'Vector',
    # Varieties and fans
    'AffineToricVariety', 'FanRefinement', 'DivisorialValuation',
    # Divisors and ideals
    'TWeilDivisor', 'MonomialFractionalIdeal', 'QCartierData',
    # Pairs
    'PairSpec', 'PairTerm', 'BoundarySpec', 'StabilizationCertificate',
    'AdjointSequenceCheck', 'Body',
    # Classification
    'Classification', 'IntersectionData', 'LcCenter', 'Witness',
    'LogLevel', 'CanLevel', 'SurfaceLevel',
    # Documents
    'ProblemDocument', 'ResultDocument',
]
