import contextlib
import io

import pytest

from chambers import cli


@pytest.fixture
def run_cli():
    """Invoke the command line in-process, capturing stdout/stderr."""
    def run(*argv):
        out, err = io.StringIO(), io.StringIO()
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            try:
                code = cli.main(list(argv))
            except SystemExit as exc:
                code = exc.code
        return code, out.getvalue(), err.getvalue()
    return run
