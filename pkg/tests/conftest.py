import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Force one-time jit compilation out of any timed test section."""
    from fbv_prover.relweb import c1_check, c2_check, check_s1_s7, web_of
    from fbv_prover.syntax import parse

    s = parse("[(a,b),(-a,-b)]")
    check_s1_s7(web_of(s))
    c1_check(s)
    c2_check(s)
