"""
Run a workbench experiment without installing the package.

Usage:
  PYTHONPATH=. poetry run python run_experiment.py memory-sweep \
    --config configs/memory_sweep.json \
    --out results/memory_sweep.csv \
    --seed 7 --threads 4
"""

from core.experiments.cli import run

if __name__ == "__main__":
    run()
