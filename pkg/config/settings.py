"""
Configuration settings for the condensed-detachment toolkit.
"""
import os
from pathlib import Path

# Project root directory
ROOT_DIR = Path(__file__).parent.parent

# Named single-axiom systems (Polish notation)
AXIOMS = {
    "Łukasiewicz": "CCCpqrCCrpCsp",
    "Syll-Simp": "CCCpqrCqr",
    "Simp": "CpCqp",
    "Syll": "CCpqCCqrCpr",
    "Peirce": "CCCpqpp",
}

# Default axiom system
DEFAULT_AXIOM = "Łukasiewicz"

# Label reserved for n-simplified minor premises
N_LABEL = "n"

# Display names for canonical variables: p..w, then v1, v2, ...
VARIABLE_NAMES = "pqrstuvw"
OVERFLOW_VARIABLE_PREFIX = "v"

# Implication functor of formula terms and detachment functor of proof terms
IMPLICATION = "i"
DETACHMENT = "D"

# Minimal-proof search budgets (exhaustive up to these sizes)
MC_CSIZE_BUDGET = 6
MT_TSIZE_BUDGET = 9

# Prover defaults
DEFAULT_POLICY = "psp"
DEFAULT_MAX_LEVEL = 30
DEFAULT_MAX_FT = 17
DEFAULT_MAX_FH = 7
DEFAULT_MAX_FV = None
# PSP partners of a lemma: its subterms down to this depth plus the axioms (None: all subterms)
DEFAULT_PSP_DEPTH = 2
# D-terms kept per prover level (unset: all, in discovery order)
DEFAULT_CACHE_CAP = int(os.environ["CDTOOLS_CACHE_CAP"]) if os.environ.get("CDTOOLS_CACHE_CAP") else None
# Memoized MGTs per axiom assignment
MGT_CACHE_SIZE = int(os.environ.get("CDTOOLS_MGT_CACHE", "65536"))

# Largest n accepted by count_dterms per measure
COUNT_LIMITS = {
    "tsize": 400,
    "height": 12,
    "csize": 6,
    "prime": 20,
    "psp": 8,
}

# Resource limits
TIME_LIMIT = float(os.environ.get("CDTOOLS_TIME_LIMIT", "600"))
DEFAULT_JOBS = int(os.environ.get("CDTOOLS_JOBS", "1"))

# Directory paths
DATA_DIR = ROOT_DIR / "data"
REPORTS_DIR = ROOT_DIR / "reports"

# Create directories if they don't exist
REPORTS_DIR.mkdir(exist_ok=True)

# Shipped corpora
CORPUS_FILES = {
    "mer": DATA_DIR / "mer.cdp",
    "luk": DATA_DIR / "luk.cdp",
    "d29": DATA_DIR / "d29.cdp",
}
CONCORDANCE_FILE = DATA_DIR / "concordance.json"

# Property table columns, in output order
REPORT_COLUMNS = [
    "MER", "ŁUK", "NN", "DC", "DT", "DH", "DX", "DI", "DR", "DS", "DP",
    "DK_L", "DK_R", "FC", "FT", "FH", "FV", "FO", "MC", "MT", "RS", "RC",
    "IT_U", "IT_M", "IH_U", "IH_M",
]

# Logging
LOG_LEVEL = os.environ.get("CDTOOLS_LOG_LEVEL", "INFO")
LOG_FORMAT = "%(asctime)s [%(levelname)8s] %(name)s: %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
