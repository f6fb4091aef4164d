#!/usr/bin/env python3
"""
tsentinel - telemetry-based DoS detection toolkit.

This is the main entry point for the tsentinel command line.

Available subcommands:
- synth: synthesize baseline, attack or mixed telemetry traces
- features: PCA feature ranking
- eval: train and score kNN and CART
- detect: replay a trace through a saved model
- plot-data: per-metric data for comparing two scenarios
"""

import sys

from src.tsentinel.cli import main as cli_main


def main():
    """Main entry point for the application."""
    try:
        sys.exit(cli_main())
    except KeyboardInterrupt:
        print("\nExiting tsentinel...", file=sys.stderr)
        sys.exit(130)


if __name__ == "__main__":
    main()
