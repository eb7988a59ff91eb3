"""Test plugin: an external hider built on the engine's own library."""
import argparse

from hideseek.hiders import hider_noise
from hideseek.io import load_dataset, save_dataset

if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--input", required=True)
    parser.add_argument("--output", required=True)
    args = parser.parse_args()
    save_dataset(hider_noise(load_dataset(args.input), 0.3, 424242), args.output)
