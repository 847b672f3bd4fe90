import pytest

from connsys import ConnectivitySystem


@pytest.fixture(scope="session")
def c4_edge():
    return ConnectivitySystem.from_edge_cut(
        ["e1", "e2", "e3", "e4"], 4, [(0, 1), (1, 2), (2, 3), (3, 0)]
    )


@pytest.fixture(scope="session")
def c4_vertex():
    return ConnectivitySystem.from_vertex_cut(
        ["1", "2", "3", "4"], 4, [(0, 1), (1, 2), (2, 3), (3, 0)]
    )


@pytest.fixture(scope="session")
def k4_edge():
    return ConnectivitySystem.from_edge_cut(
        ["e1", "e2", "e3", "e4", "e5", "e6"],
        4,
        [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
    )


@pytest.fixture(scope="session")
def trivial1():
    return ConnectivitySystem.from_table(["x"], {0: 0, 1: 0})


@pytest.fixture(scope="session")
def trivial2():
    return ConnectivitySystem.from_table(["x", "y"], {0: 0, 1: 0, 2: 0, 3: 0})


@pytest.fixture(scope="session")
def trivial3():
    return ConnectivitySystem.from_table(["a", "b", "c"], {m: 0 for m in range(8)})


def make_table_system(n, pair_values):
    """Systems over n elements from per-complement-pair values; may raise on invalid."""
    labels = [chr(ord("a") + i) for i in range(n)]
    full = (1 << n) - 1
    table = {0: 0}
    for mask, value in pair_values.items():
        table[mask] = value
        table[full ^ mask] = value
    return ConnectivitySystem.from_table(labels, table)


def all_three_element_systems(values=(0, 1, 2)):
    """Every valid system over {a,b,c} with pair values drawn from the given set."""
    from connsys.errors import SubmodularityViolation

    systems = []
    for v1 in values:
        for v2 in values:
            for v3 in values:
                try:
                    systems.append(make_table_system(3, {0b001: v1, 0b010: v2, 0b100: v3}))
                except SubmodularityViolation:
                    continue
    return systems
