from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


def rationals(max_num=9, max_den=4, nonzero=False):
    s = st.builds(Fraction, st.integers(-max_num, max_num), st.integers(1, max_den))
    return s.filter(lambda q: q != 0) if nonzero else s


def dense_matrices(max_rows=5, max_cols=5, max_num=4):
    """Small dense rational matrices, biased towards sparsity and low rank."""
    entry = st.one_of(st.just(Fraction(0)), st.just(Fraction(0)), rationals(max_num, 3))
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(entry, min_size=c, max_size=c), min_size=r, max_size=r)))
