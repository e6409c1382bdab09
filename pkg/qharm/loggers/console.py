import sys

from qharm.enums.shared import ProgressMode


class PrintSameLine:
    """Class to correctly print on same line"""

    def __init__(self, stream=None):
        self.last_message = ""
        self.stream = stream if stream is not None else sys.stderr

    def print_msg(self, msg: str):
        print(" " * len(self.last_message), end="\r", flush=True, file=self.stream)
        print(msg, end="\r", flush=True, file=self.stream)
        self.last_message = msg

    def finish(self):
        if self.last_message:
            print(file=self.stream, flush=True)
            self.last_message = ""


class ConsoleLogger:
    """Progress and diagnostics on stderr, gated by ProgressMode.

    Data output never goes through this class.
    """

    def __init__(self, progress_mode: ProgressMode = ProgressMode.STANDARD, stream=None):
        self.progress_mode = progress_mode
        self.stream = stream if stream is not None else sys.stderr
        self._same_line = PrintSameLine(self.stream)

    def info(self, msg: str):
        if self.progress_mode != ProgressMode.SILENT:
            self._same_line.finish()
            print(msg, file=self.stream, flush=True)

    def debug(self, msg: str):
        if self.progress_mode == ProgressMode.DEBUG:
            self._same_line.finish()
            print(msg, file=self.stream, flush=True)

    def progress(self, done: int, total: int, label: str = ""):
        if self.progress_mode == ProgressMode.STANDARD:
            percent = "{:.1%}".format(done / total if total else 1.0)
            self._same_line.print_msg(f"{label}{done}/{total} ({percent})")
            if done >= total:
                self._same_line.finish()
