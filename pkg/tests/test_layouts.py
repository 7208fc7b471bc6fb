import pytest

import treasurehunt as th
from treasurehunt.geometry import in_free_space
from treasurehunt.layouts import DEFAULT_TARGET_COUNTS


def test_layout_names_cover_the_catalog():
    names = th.layout_names()
    for expected in ("human10x10", "fog20x20", "maze1", "maze2", "maze3",
                     "maze4", "workspaceA", "workspaceB"):
        assert expected in names


@pytest.mark.parametrize("name", ["human10x10", "fog20x20", "maze1", "maze2",
                                  "maze3", "maze4", "workspaceA", "workspaceB"])
def test_layouts_are_valid_and_startable(name):
    ws = th.load_layout(name)
    assert ws.name == name
    assert in_free_space(ws.start, 0.2, ws)  # agent fits at the start
    assert ws.targets == ()  # layouts ship without targets


def test_load_layout_unknown():
    with pytest.raises(KeyError):
        th.load_layout("atlantis")


def test_default_target_counts_placeable(car_net):
    for name, count in DEFAULT_TARGET_COUNTS.items():
        ws = th.sample_scenario(name, count, car_net, seed=0)
        assert len(ws.targets) == count
