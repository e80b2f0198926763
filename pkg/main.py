import sys
from dotenv import load_dotenv
from datadog import initialize

# Load local .env if present
load_dotenv()

# DogStatsD client; without a local agent the packets are dropped
initialize()


if __name__ == "__main__":
    from src.cli import main
    sys.exit(main())
