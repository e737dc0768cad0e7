import sys

from src.polsqueezesim.main import load_polsqueezesim_app

if __name__ == "__main__":
    sys.exit(load_polsqueezesim_app())
