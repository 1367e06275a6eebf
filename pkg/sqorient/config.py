import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

ROOT_DIR = Path(__file__).resolve().parent.parent

CORPUS_DIR = Path(os.environ.get("SQORIENT_CORPUS_DIR", ROOT_DIR / "corpus"))
GOLDEN_DIR = Path(os.environ.get("SQORIENT_GOLDEN_DIR", CORPUS_DIR / "golden"))

# Parallelism budget for report fan-out; output never depends on it
DEFAULT_THREADS = int(os.environ.get("SQORIENT_THREADS", "1"))

LOG_LEVEL = os.environ.get("SQORIENT_LOG_LEVEL", "WARNING")
REPORT_FORMAT = os.environ.get("SQORIENT_FORMAT", "json")

# Degrees above dim that must vanish; empty means "max generator degree"
VALIDATE_SLACK = os.environ.get("SQORIENT_VALIDATE_SLACK", "")

SCHEMA_VERSION = 1
