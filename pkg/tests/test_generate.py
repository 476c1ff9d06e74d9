"""Synthetic network construction: determinism, statistics, config parsing."""

import numpy as np
import pytest

from dcsrnet import (
    FormatError,
    GenSpec,
    export_edgelist,
    generate,
    in_csr,
    parse_config,
    save_network,
    scaling_run,
    spec_from_mapping,
    validate,
)
from dcsrnet.generate import QUANTUM


def test_generate_is_deterministic(tmp_path):
    spec = GenSpec(kind="er", n=40, p=0.1, k=3, seed=123)
    save_network(generate(spec), str(tmp_path / "a"))
    save_network(generate(spec), str(tmp_path / "b"))
    for path in sorted(tmp_path.glob("a.*")):
        twin = tmp_path / ("b" + path.name[1:])
        assert path.read_bytes() == twin.read_bytes(), path.name


def test_generate_seed_changes_output():
    a = generate(GenSpec(kind="er", n=40, p=0.1, seed=1))
    b = generate(GenSpec(kind="er", n=40, p=0.1, seed=2))
    assert export_edgelist(a) != export_edgelist(b)


@pytest.mark.parametrize("spec", [
    GenSpec(kind="er", n=30, p=0.15, k=2, seed=5),
    GenSpec(kind="spatial", n=30, p=0.6, sigma=0.3, k=3, seed=5),
    GenSpec(kind="populations", populations=(8, 12), seed=5,
            pmatrix=((0.2, 0.3), (0.1, 0.0))),
])
def test_generate_output_is_valid(spec):
    net = generate(spec)
    assert net.n == spec.n or spec.kind == "populations"
    report = validate(net)
    assert report.ok, str(report)


def test_generate_partition_count_does_not_change_content():
    a = generate(GenSpec(kind="er", n=36, p=0.12, k=1, seed=9))
    b = generate(GenSpec(kind="er", n=36, p=0.12, k=4, seed=9))
    assert export_edgelist(a) == export_edgelist(b)
    ca = np.concatenate([blk.coords for blk in a.partitions])
    cb = np.concatenate([blk.coords for blk in b.partitions])
    assert ca.tolist() == cb.tolist()
    assert b.distribution.dist == (0, 9, 18, 27, 36)


def test_generate_er_extremes():
    full = generate(GenSpec(kind="er", n=3, p=1.0, seed=0))
    assert full.m == 6
    empty = generate(GenSpec(kind="er", n=3, p=0.0, seed=0))
    assert empty.m == 0
    single = generate(GenSpec(kind="er", n=1, p=1.0, seed=0))
    assert single.n == 1 and single.m == 0


def test_generate_er_edge_count_statistics():
    # m ~ Binomial(n(n-1), p): mean 1990, sigma ~ 43.5 for these numbers.
    net = generate(GenSpec(kind="er", n=200, p=0.05, seed=31))
    mean = 200 * 199 * 0.05
    sigma = (200 * 199 * 0.05 * 0.95) ** 0.5
    assert abs(net.m - mean) < 4 * sigma


def test_generate_values_are_quantized_and_ranged():
    spec = GenSpec(kind="er", n=25, p=0.3, seed=7, weight=(0.05, 0.15),
                   delay=(1, 5), v_init=(0.0, 0.5))
    net = generate(spec)
    seen = 0
    for block in net.partitions:
        for i in range(block.n_local):
            _, (v0, r0) = block.vertex_entry(i)
            assert r0 == 0.0
            assert 0.0 <= v0 <= 0.5
            assert v0 * QUANTUM == round(v0 * QUANTUM)
            for name, vals in block.edge_entries(i):
                if name == "none":
                    continue
                w, d = vals
                seen += 1
                assert 0.05 - 1 / QUANTUM <= w <= 0.15 + 1 / QUANTUM
                assert w * QUANTUM == round(w * QUANTUM)
                assert d == int(d) and 1 <= d <= 5
    assert seen == net.m > 0


def test_generate_coords_inside_box():
    net = generate(GenSpec(kind="er", n=30, p=0.0, seed=3, box=(-2.0, 3.0)))
    coords = np.concatenate([blk.coords for blk in net.partitions])
    assert coords.min() >= -2.0 and coords.max() <= 3.0


def test_generate_populations_block_structure():
    # Only pop 0 -> pop 1 edges are allowed, and they always fire.
    spec = GenSpec(kind="populations", populations=(10, 10), seed=2,
                   pmatrix=((0.0, 1.0), (0.0, 0.0)))
    net = generate(spec)
    assert net.n == 20 and net.m == 100
    row_ptr, col = in_csr(net)
    for g in range(10):
        assert row_ptr[g] == row_ptr[g + 1]
    for g in range(10, 20):
        assert col[row_ptr[g]:row_ptr[g + 1]].tolist() == list(range(10))


def test_generate_populations_stack_along_z():
    spec = GenSpec(kind="populations", populations=(15, 15), seed=4,
                   pmatrix=((0.0, 0.0), (0.0, 0.0)))
    net = generate(spec)
    coords = np.concatenate([blk.coords for blk in net.partitions])
    assert coords[:15, 2].max() < 0.5
    assert coords[15:, 2].min() >= 0.5


def test_generate_spatial_sigma_localizes():
    # A vanishing interaction radius kills every edge; a huge one recovers
    # plain er statistics.
    nothing = generate(GenSpec(kind="spatial", n=40, p=0.5, sigma=1e-4, seed=6))
    assert nothing.m == 0
    wide = generate(GenSpec(kind="spatial", n=100, p=0.3, sigma=1e6, seed=6))
    mean = 100 * 99 * 0.3
    sigma = (100 * 99 * 0.3 * 0.7) ** 0.5
    assert abs(wide.m - mean) < 5 * sigma


def test_generate_coords_stable_under_n_growth():
    a = generate(GenSpec(kind="er", n=10, p=0.1, seed=42))
    b = generate(GenSpec(kind="er", n=14, p=0.1, seed=42))
    ca = np.concatenate([blk.coords for blk in a.partitions])
    cb = np.concatenate([blk.coords for blk in b.partitions])
    assert ca.tolist() == cb[:10].tolist()


@pytest.mark.parametrize("kwargs", [
    dict(kind="star", n=5),
    dict(kind="er", n=-1),
    dict(kind="er", n=5, p=1.5),
    dict(kind="er", n=5, k=0),
    dict(kind="er", n=5, seed=-1),
    dict(kind="er", n=5, delay=(0, 3)),
    dict(kind="er", n=5, weight=(0.2, 0.1)),
    dict(kind="er", n=5, box=(1.0, 1.0)),
    dict(kind="populations", populations=(3, 3), pmatrix=((0.5,),)),
    dict(kind="populations", populations=(3, 3), n=5,
         pmatrix=((0.0, 0.0), (0.0, 0.0))),
    dict(kind="populations"),
])
def test_genspec_rejects_bad_inputs(kwargs):
    with pytest.raises(ValueError):
        GenSpec(**kwargs)


def test_parse_config():
    text = "# demo\nkind = er\nn=50 # fifty\n\np=0.1\n"
    assert parse_config(text) == {"kind": "er", "n": "50", "p": "0.1"}


@pytest.mark.parametrize("text", ["kind\n", "=er\n", "kind=\n"])
def test_parse_config_errors(text):
    with pytest.raises(FormatError) as err:
        parse_config(text)
    assert err.value.code == "PARAM"


def test_spec_from_mapping_full():
    spec = spec_from_mapping({
        "kind": "er", "n": "50", "p": "0.2", "k": "2", "seed": "7",
        "weight": "0.1,0.2", "delay": "2,4", "box": "-1,1",
        "v_init": "0,0.25",
    })
    assert spec == GenSpec(kind="er", n=50, p=0.2, k=2, seed=7,
                           weight=(0.1, 0.2), delay=(2, 4), box=(-1.0, 1.0),
                           v_init=(0.0, 0.25))


def test_spec_from_mapping_populations():
    spec = spec_from_mapping({
        "kind": "populations", "populations": "4,6",
        "pmatrix": "0.1,0.2;0.3,0.4", "seed": "1",
    })
    assert spec.n == 10
    assert spec.pmatrix == ((0.1, 0.2), (0.3, 0.4))


@pytest.mark.parametrize("mapping", [
    {"n": "5"},
    {"kind": "er", "bogus": "1"},
    {"kind": "er", "weight": "0.1"},
    {"kind": "er", "n": "x"},
])
def test_spec_from_mapping_errors(mapping):
    with pytest.raises(ValueError):
        spec_from_mapping(mapping)


def test_scaling_run_writes_growing_filesets(tmp_path):
    rows = scaling_run(GenSpec(kind="er", n=40, p=0.1, seed=11),
                       [1.0, 2.0], str(tmp_path))
    assert [r[0] for r in rows] == [40, 80]
    assert rows[1][1] > rows[0][1]
    assert rows[1][2] > rows[0][2]
    assert (tmp_path / "scale0.dist").exists()
    assert (tmp_path / "scale1.adjcy.0").exists()
