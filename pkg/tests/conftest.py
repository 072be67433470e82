import random

import pytest

import synth


@pytest.fixture
def rng():
    return random.Random(20240811)


@pytest.fixture
def background():
    return synth.solid_frame()


@pytest.fixture
def rock_frame():
    return synth.disk_frame(cx=70, cy=80, r=25)


@pytest.fixture
def paper_frame():
    return synth.disk_frame(cx=70, cy=80, r=40)  # 1.6x the rock disk


@pytest.fixture
def scissors_frame():
    return synth.v_frame(cx=70, cy=90, r=25)
