from .oracle import OracleClassifier
from .two_phase import TwoPhaseClassifier
from .vertical import VerticalClassifier

ALL_ALGORITHMS = {
    "gen": TwoPhaseClassifier,
    "fast": VerticalClassifier,
    "oracle": OracleClassifier,
}
