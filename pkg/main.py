import sys

from entroflow.command_manager import main

if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
