import pytest

from quasiarr.reproduce import EXAMPLES, run_example


@pytest.mark.slow
@pytest.mark.parametrize("name", list(EXAMPLES))
def test_example_rows_pass(name):
    rows = run_example(name)
    assert rows
    failing = [row.name for row in rows if not row.passed]
    assert not failing


def test_unknown_example():
    with pytest.raises(KeyError):
        run_example("nope")
