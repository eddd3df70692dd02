from hypothesis import strategies as st


@st.composite
def cnfs(draw, max_vars=7, max_clauses=18, max_len=4):
    n = draw(st.integers(1, max_vars))
    lit = st.integers(1, n).flatmap(lambda v: st.sampled_from((v, -v)))
    clauses = draw(st.lists(st.lists(lit, min_size=1, max_size=max_len).map(tuple),
                            max_size=max_clauses))
    return n, clauses


@st.composite
def wcnfs(draw, max_vars=6, max_soft=7, max_weight=4):
    n, hard = draw(cnfs(max_vars=max_vars, max_clauses=10))
    lit = st.integers(1, n).flatmap(lambda v: st.sampled_from((v, -v)))
    soft = draw(st.lists(st.tuples(st.lists(lit, min_size=1, max_size=3).map(tuple),
                                   st.integers(1, max_weight)), max_size=max_soft))
    return n, hard, soft
