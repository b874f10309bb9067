"""Exact Cartan matrices, Coxeter/Dynkin diagrams, positive-definiteness
classification and finite root systems."""

from .cartan import (
    CartanMatrix,
    SymCartanMatrix,
    check_symmetrisation,
    components,
    is_isomorphic,
    symmetrise,
    validate_cartan,
)
from .classify import (
    ClassificationResult,
    GenCoxeterDiagram,
    MinorSequence,
    SylvesterResult,
    classify_connected,
    classify_text,
    determinant,
    minor_sequence,
    node_reduce,
    sylvester_pd,
)
from .diagram import (
    CoxeterDiagram,
    DynkinDiagram,
    coxeter_of_sym,
    coxeter_to_sym,
    diagram_isomorphism,
    dynkin_of_cartan,
    orient,
    parse_diagram,
    print_diagram,
    to_dot,
)
from .enumeration import enumerate_connected
from .errors import (
    BoundExceeded,
    CartanAxiomError,
    DiagramSyntaxError,
    DynkinError,
    NotConnected,
    NotExpressible,
    NotFiniteWithinGuard,
    NotSymmetrisable,
    OrientationError,
    PatternMismatch,
)
from .exactnum import QF, SQRT2, SQRT3, Rational
from .roots import (
    RootSystem,
    VerificationReport,
    generate_roots,
    gram_closure,
    root_norms,
    simple_reflection,
    verify_root_system,
)

__version__ = "0.1.0"
