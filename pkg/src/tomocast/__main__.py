"""Main entry point for the tomocast CLI"""
import sys

from tomocast import main

sys.exit(main())
