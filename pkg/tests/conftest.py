import pytest

from gqsm.quantifiers import Registry

# Three small programs reused across test modules.

# A sum threshold gates p(2); the other two rules close p downward.
SUM_THRESHOLD = """\
#universe {-1, 1, 2}.

p(2) :- not sum{X : p(X)} < 2.
p(-1) :- sum{X : p(X)} > -1.
p(1) :- p(-1).
"""

# Self-support through a negated cardinality test: "derive p(a) unless
# p's extension is empty".  The two semantics disagree here.
COUNT_GUARD = """\
#universe {a}.

p(a) :- not atmost(0){X : p(X)}.
"""

# Classic odd loop, no model under either semantics.
NEGATIVE_LOOP = """\
#universe {1}.

p :- not p.
"""


@pytest.fixture
def registry():
    return Registry()
