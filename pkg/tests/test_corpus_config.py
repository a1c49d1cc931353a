"""Corpus generator determinism and statistics; run configuration."""

import json

import pytest

from gpdalg.config import RunConfig, parallel_map
from gpdalg.corpus import corpus_generate, corpus_groupoids
from gpdalg.documents import groupoid_from_payload, graph_from_payload
from gpdalg.errors import SchemaError


def test_corpus_deterministic():
    a = corpus_generate(1, count=12, max_elements=12)
    b = corpus_generate(1, count=12, max_elements=12)
    assert [d.payload for d in a] == [d.payload for d in b]
    c = corpus_generate(2, count=12, max_elements=12)
    assert [d.payload for d in a] != [d.payload for d in c]


def test_corpus_documents_validate():
    for document in corpus_generate(3, count=15, max_elements=16):
        groupoid_from_payload(document.payload)
    for document in corpus_generate(4, count=6, kinds=("graph",)):
        graph_from_payload(document.payload)


def test_corpus_statistics_guarantees():
    groupoids = corpus_groupoids(5, count=30, max_elements=20)
    for start in range(0, 30, 10):
        window = groupoids[start:start + 10]
        assert any(not g.is_principal() for g in window)
        assert any(len(g.orbits()) > 1 for g in window)


def test_corpus_respects_size_bound():
    for g in corpus_groupoids(6, count=25, max_elements=14):
        assert len(g) <= 14


def test_runconfig_validation():
    cfg = RunConfig()
    assert cfg.arithmetic == "exact"
    with pytest.raises(SchemaError):
        RunConfig(arithmetic="both")
    with pytest.raises(SchemaError):
        RunConfig(eigen_tol=-1)
    with pytest.raises(SchemaError):
        RunConfig.from_dict({"bogus": 1})


def test_runconfig_load_and_env(tmp_path, monkeypatch):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"parallelism": 2, "eigen_tol": 1e-10}))
    cfg = RunConfig.load(str(path))
    assert cfg.parallelism == 2 and cfg.eigen_tol == 1e-10
    monkeypatch.setenv("GPDALG_CONFIG", str(path))
    assert RunConfig.default().parallelism == 2
    monkeypatch.delenv("GPDALG_CONFIG")
    assert RunConfig.default().parallelism == 1


def test_parallel_map_matches_serial():
    items = list(range(20))
    assert parallel_map(lambda x: x * x, items, degree=1) == \
        parallel_map(lambda x: x * x, items, degree=4)
