import pytest

from mobreflect.construction import audit, generate_configuration
from mobreflect.coxeter import presentation_from_audit
from mobreflect.cubical import CubicalCell, build_complex, unit_cube_skeleton

ACCEPTANCE = []


@pytest.fixture(scope="session")
def square():
    return build_complex([CubicalCell((0, 0, 0, 0), (0, 1))])


@pytest.fixture(scope="session")
def square_conf(square):
    return generate_configuration(square)


@pytest.fixture(scope="session")
def square_audit(square_conf):
    return audit(square_conf)


@pytest.fixture(scope="session")
def square_pres(square_audit):
    return presentation_from_audit(square_audit)


@pytest.fixture(scope="session")
def cube():
    return unit_cube_skeleton()


@pytest.fixture(scope="session")
def cube_conf(cube):
    return generate_configuration(cube)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE:
        terminalreporter.write_line(line)
