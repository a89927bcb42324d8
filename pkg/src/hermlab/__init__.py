"""hermlab: a numerical laboratory for left-invariant Hermitian geometry."""

from .classifiers import ClassificationReport, classify
from .functionals import (
    ResidualReport,
    first_variation,
    gauduchon_critical_residual,
    gauduchon_functional,
    residual_report,
    torsion_critical_residual,
    torsion_functional,
)
from .lie_hermitian import (
    HermitianStructure,
    RealLieData,
    StructureConstants,
    catalog,
    complexify,
    exterior_d,
    frame_change,
    unitary_reduction,
    validate,
)
from .optimizer import OptimConfig, OptimTrace, minimize
from .tensor_algebra import InvariantForm, bidegree_part, cholesky, conjugate_form, wedge
from .torsion_engine import TorsionPackage, analyze

__version__ = "0.1.0"

__all__ = [
    "ClassificationReport",
    "HermitianStructure",
    "InvariantForm",
    "OptimConfig",
    "OptimTrace",
    "RealLieData",
    "ResidualReport",
    "StructureConstants",
    "TorsionPackage",
    "analyze",
    "bidegree_part",
    "catalog",
    "cholesky",
    "classify",
    "complexify",
    "conjugate_form",
    "exterior_d",
    "first_variation",
    "frame_change",
    "gauduchon_critical_residual",
    "gauduchon_functional",
    "minimize",
    "residual_report",
    "torsion_critical_residual",
    "torsion_functional",
    "unitary_reduction",
    "validate",
    "wedge",
    "__version__",
]
