import dataclasses

import pytest

from groupaes.config import Config, GenericConfig
from groupaes.synthetic import write_corpus, write_delta_pairs


@pytest.fixture(scope="session")
def fast_config() -> Config:
    """Default config with a lighter K-means budget for unit-test speed."""
    return Config(generic=GenericConfig(kmeans_restarts=3, kmeans_max_iter=40))


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    directory = tmp_path_factory.mktemp("corpus")
    write_corpus(directory, seed=11)
    return directory


@pytest.fixture(scope="session")
def delta_dir(tmp_path_factory):
    directory = tmp_path_factory.mktemp("delta")
    manifest = write_delta_pairs(directory, seed=5)
    return directory, manifest
