"""Bundled example plants.

* ``workcell.pnet``: a small manufacturing cell with a two-for-one
  assembly step and a scrap lane; blocking, and small enough to check by
  hand.
* ``assembly_line.pnet``: a mid-size production line whose initial
  stock and constraint bound are meant to be scaled; the usual
  benchmark subject.
* ``emergency_dept.pnet``: a patient-flow model where the bound on
  in-treatment patients decides blocking vs non-blocking.
"""

from importlib import resources

from ..pnet import ParsedNet, parse_net


def names() -> tuple[str, ...]:
    files = resources.files(__name__)
    return tuple(sorted(f.name for f in files.iterdir()
                        if f.name.endswith(".pnet")))


def net_text(name: str) -> str:
    if not name.endswith(".pnet"):
        name += ".pnet"
    return resources.files(__name__).joinpath(name).read_text(encoding="utf-8")


def load(name: str) -> ParsedNet:
    return parse_net(net_text(name))
