import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
# scripts/ holds the generative oracle used by the acceptance suite.
sys.path.insert(0, str(ROOT / "scripts"))

FIXTURES = Path(__file__).resolve().parent / "fixtures"
