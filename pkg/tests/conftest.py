import numpy as np
import pytest

from fbqc.networks import (
    build_4star,
    build_6ring,
    build_bell_ftfn_example,
    build_four_line_example,
    network_groups,
)


@pytest.fixture(scope="session")
def fig3():
    net = build_four_line_example()
    r, f = network_groups(net)
    return net, r, f


@pytest.fixture(scope="session")
def fig4():
    net = build_bell_ftfn_example()
    r, f = network_groups(net)
    return net, r, f


@pytest.fixture(scope="session")
def star2():
    return build_4star(2, periodic=True)


@pytest.fixture(scope="session")
def ring2():
    return build_6ring(2, periodic=True)


@pytest.fixture(scope="session")
def star3():
    return build_4star(3, periodic=True)


@pytest.fixture(scope="session")
def ring3():
    return build_6ring(3, periodic=True)
