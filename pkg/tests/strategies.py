from hypothesis import strategies as st

from floydtight.groups import GroupBackend


def words(backend: GroupBackend, max_size: int = 12, min_size: int = 0) -> st.SearchStrategy[str]:
    return st.lists(st.sampled_from(backend.letters), min_size=min_size, max_size=max_size).map("".join)


def elements(backend: GroupBackend, max_size: int = 12) -> st.SearchStrategy[str]:
    return words(backend, max_size).map(backend.reduce)
