import sys

from entroflow.command_manager import main

sys.exit(main(sys.argv[1:]))
