# --- START OF FILE chainforge/enums.py ---

from enum import Enum, auto

class Family(Enum):
    """Group families understood by the catalog and the group-id grammar."""
    ALTERNATING = auto()
    SYMMETRIC = auto()
    CYCLIC = auto()
    DIHEDRAL = auto()
    LINEAR = auto()          # L_n(q) and U_n(q), told apart by Sign
    SPECIAL_LINEAR = auto()  # SL_n(q) and SU_n(q)
    PROJECTIVE_GENERAL = auto()  # PGL_n(q) and PGU_n(q)
    SYMPLECTIC = auto()
    SUZUKI = auto()
    REE = auto()
    TRIALITY = auto()        # 3D4(q)
    TWISTED_F4 = auto()      # 2F4(q), q = 2^f with f >= 3 odd
    TITS = auto()            # 2F4(2)'
    G2 = auto()
    E6 = auto()
    E7 = auto()
    E8 = auto()
    ORTHOGONAL = auto()
    SPORADIC = auto()
    PRODUCT = auto()
    CENTRAL = auto()         # p.T
    EXTENSION = auto()       # T.p
    WREATH = auto()          # H wr C_p

class Sign(Enum):
    """Twist sign for linear/unitary and orthogonal families."""
    PLUS = "+"
    MINUS = "-"
    ZERO = "0"

    @property
    def value_int(self) -> int:
        return {"+": 1, "-": -1, "0": 0}[self.value]

class ValueKind(Enum):
    EXACT = "exact"
    RANGE = "range"

class LengthProvenance(Enum):
    """Names the rule a length engine applied."""
    FORMULA_AN = "formula-an"
    FORMULA_L2_EVEN = "formula-L2-even"
    FORMULA_L2_ODD = "formula-L2-odd"
    FORMULA_L2_PRIME = "formula-L2-prime"
    FORMULA_U3_EVEN = "formula-U3-even"
    FORMULA_L3_EVEN = "formula-L3-even"
    FORMULA_SZ = "formula-Sz"
    FORMULA_CHAR2 = "formula-char2-borel"
    PAPER_PRINTED = "paper-printed"
    TABLE5_FAMILY = "table5-family"
    BOREL_LOWER_BOUND = "borel-lower-bound"
    SOLUBLE_OMEGA = "soluble-omega"
    ADDITIVITY = "additivity"

class DepthProvenance(Enum):
    """Names the rule a depth engine applied."""
    TABLE1 = "table1"
    TABLE4 = "table4"
    TABLE3 = "table3"
    L2P_DICHOTOMY = "L2p-dichotomy"
    L2P3_DICHOTOMY = "L2p3-dichotomy"
    KOHLER_CHIEF = "kohler-chief"
    SW_LOWER = "sw-lower"
    SUBFIELD_UPPER = "subfield-upper"
    PAPER_PRINTED = "paper-printed"
    PRIME_FACTOR = "prime-factor"
    EXTENSION_BOUND = "extension-bound"
    MAXIMAL_UPPER = "maximal-upper"
    L2P2_RULE = "L2p2-rule"
    DIRECT_PRODUCT = "direct-product"

class ClassifyTag(Enum):
    """Classification scans exposed by `main.py classify`."""
    DEPTH3 = "depth3"
    DEPTH4_QUASISIMPLE = "depth4-quasisimple"
    TABLE3 = "table3"
    TABLE4 = "table4"
    LENGTH_AT_MOST_9 = "length<=9"
    CD1 = "cd1"
    CD2 = "cd2"
    CR_EQUALITY = "cr-equality"

    @classmethod
    def parse(cls, text: str) -> "ClassifyTag":
        normalized = text.replace("≤", "<=")
        for tag in cls:
            if tag.value == normalized:
                return tag
        raise ValueError(f"Unknown classification tag '{text}'")

class OutputFormat(Enum):
    JSON = "json"
    CSV = "csv"
    TEXT = "text"

class CheckStatus(Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIP = "skip"

class VerdictKind(Enum):
    AGREE = "agree"
    CONTAINED = "contained"
    MISMATCH = "mismatch"
    ENGINE_UNCOVERED = "engine-uncovered"

# --- END OF FILE chainforge/enums.py ---
