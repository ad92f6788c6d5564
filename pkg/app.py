"""
semisep entry point.

    python app.py scenes/offset_halves.json --mode full

Environment variables (see semisep/config.py) are read from .env when
present; SEMISEP_LOG_TO_FILE mirrors the session log to SEMISEP_LOG_FILE.
"""
import sys

from dotenv import load_dotenv

# Load environment variables before the configuration is imported
load_dotenv()

from semisep.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
