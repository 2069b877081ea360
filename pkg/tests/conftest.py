import sys
from pathlib import Path

# make the oracle helpers importable from every test module
sys.path.insert(0, str(Path(__file__).resolve().parent))
