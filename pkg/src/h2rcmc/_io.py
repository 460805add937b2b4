import contextlib
import sys


@contextlib.contextmanager
def text_sink(dest):
    """Yield a writable text stream for a path, an open stream, or '-'."""
    if dest in (None, "-"):
        yield sys.stdout
    elif hasattr(dest, "write"):
        yield dest
    else:
        with open(dest, "w", newline="") as fh:
            yield fh
