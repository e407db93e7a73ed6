"""Run the D2PC command line with ``python -m backend.app``"""

from backend.main import main

if __name__ == "__main__":
    main()
