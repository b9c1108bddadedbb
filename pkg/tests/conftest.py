import pytest

from carleman import make_sequence


@pytest.fixture(scope="session")
def gevrey1():
    return make_sequence("gevrey", 128, delta=1.0)


@pytest.fixture(scope="session")
def gevrey_half():
    return make_sequence("gevrey", 128, delta=0.5)


@pytest.fixture(scope="session")
def qgevrey2():
    return make_sequence("qgevrey", 128, q=2.0)


@pytest.fixture(scope="session")
def logtype2():
    return make_sequence("logtype", 128, delta=2.0)


@pytest.fixture(scope="session")
def constant():
    return make_sequence("constant", 128)


BUILTIN_CASES = [
    ("gevrey", {"delta": 0.5}),
    ("gevrey", {"delta": 1.0}),
    ("gevrey", {"delta": 2.0}),
    ("qgevrey", {"q": 2.0}),
    ("qgevrey", {"q": 3.0}),
    ("logtype", {"delta": 0.5}),
    ("logtype", {"delta": 1.0}),
    ("logtype", {"delta": 2.0}),
    ("constant", {}),
]
