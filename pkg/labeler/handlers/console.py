"""
Bracket-tag status output. Errors always go to stderr as one JSON line.
"""
import json
import sys


class Console:
    def __init__(self, quiet: bool = False):
        self.quiet = quiet

    def tag(self, tag: str, message: str):
        if not self.quiet:
            print(f"[{tag}] {message}")

    def ok(self, message: str):
        self.tag("OK", message)

    def banner(self, title: str):
        if not self.quiet:
            print("=" * 60)
            print(title)
            print("=" * 60)

    @staticmethod
    def data(block: str):
        """Command output that is printed even in quiet mode"""
        print(block)

    @staticmethod
    def error(record: dict):
        print(json.dumps(record), file=sys.stderr)
