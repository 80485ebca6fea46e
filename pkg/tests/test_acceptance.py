"""End-to-end acceptance checks, one per contract criterion.

Each test prints a single ACCEPTANCE verdict line (pytest runs with -s
so they land in the terminal even on success).  Tolerances are pinned
here and nowhere looser: layout and rates are exact, mutual
information is 1e-9 bits.
"""

import os
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import pytest

from xorshard import (
    Dispersal,
    Encrypted,
    PrivacyBudget,
    ShareBlob,
    build_layout,
    collect,
    decode,
    derive_params,
    deserialize_share,
    disperse,
    encode,
    entropy_oracle,
    rate_report,
    serialize_share,
    structural_audit,
)
from xorshard.params import LayoutCase

from goldens import ALL_LISTINGS
from sweeps import forced_plain_split, main_path_params, trivial_params

GOLDEN_SHARE = Path(__file__).parent / "data" / "golden_intro_share1.xrsh"
MI_TOL = 1e-9


@contextmanager
def criterion(number, name):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number} {name}: FAIL")
        raise
    print(f"ACCEPTANCE {number} {name}: PASS")


def plan_for(servers, leak, parts):
    return build_layout(derive_params(servers, PrivacyBudget(leak, parts)))


def plain_split_pool(max_servers=6, max_leak=10, max_parts=12):
    pool = []
    for servers in range(2, max_servers + 1):
        for leak in range(1, max_leak + 1):
            for parts in range(1, max_parts + 1):
                try:
                    pool.append(forced_plain_split(servers, leak, parts))
                except ValueError:
                    continue
    return pool


def test_criterion_1_parameter_goldens():
    goldens = {
        (3, 3, 10): (1, 1, 3, 2, 2, 11, 4, 6),
        (5, 7, 11): (1, 3, 1, 4, 1, 9, 8, 3),
        (3, 5, 17): (2, 1, 6, 1, 3, 19, 7, 10),
    }
    with criterion(1, "parameter-goldens"):
        derive_params(3, PrivacyBudget(3, 10))  # warm the import path
        for (servers, leak, parts), expected in goldens.items():
            best = float("inf")
            for _ in range(5):
                start = time.perf_counter()
                p = derive_params(servers, PrivacyBudget(leak, parts))
                best = min(best, time.perf_counter() - start)
            got = (p.q, p.r, p.u, p.v, p.x, p.n_keys, p.n_plain, p.n_encrypted)
            assert got == expected, f"T={servers} {leak}/{parts}: {got}"
            assert best < 1e-3, f"derive took {best * 1e3:.3f} ms"


def test_criterion_2_layout_goldens():
    with criterion(2, "layout-goldens"):
        for (servers, leak, parts), listing in ALL_LISTINGS.items():
            plan = plan_for(servers, leak, parts)
            assert plan.slots == listing, f"T={servers} {leak}/{parts}"
        assert plan_for(5, 7, 11).server_slots(4)[3] == Encrypted(10, (1, 3, 5, 9))
        assert plan_for(3, 5, 17).server_slots(2)[11] == Encrypted(14, (19,))


def test_criterion_3_roundtrip_property():
    rng = random.Random(0xACCE)
    main_pool = list(main_path_params(max_servers=6, max_parts=30))
    rng.shuffle(main_pool)
    instances = main_pool[:800]
    trivial_pool = list(trivial_params(max_servers=6, max_parts=30))
    rng.shuffle(trivial_pool)
    instances += trivial_pool[:150]
    instances += plain_split_pool()
    assert len(instances) >= 1000

    with criterion(3, "roundtrip-property"):
        start = time.perf_counter()
        for params in instances:
            plan = build_layout(params)
            size = rng.choice((0, 1, 2, 9, 30, 31, 256, 1000, 4096))
            data = rng.randbytes(size)
            assert decode(encode(data, plan, rng=rng), plan) == data
        elapsed = time.perf_counter() - start
        assert elapsed < 30, f"{len(instances)} roundtrips took {elapsed:.1f} s"


def test_criterion_4_rate_optimality():
    with criterion(4, "rate-optimality"):
        for params in main_path_params(max_servers=6, max_parts=30):
            report = rate_report(build_layout(params), 1)
            alpha = Fraction(params.leak, params.parts)
            assert report.storage_ratio == 1 - alpha
            assert report.storage_ratio == report.storage_bound
            assert report.randomness_ratio == params.servers * (1 - alpha) - 1
            assert report.randomness_ratio == report.randomness_bound
            assert report.tight


def test_criterion_5_structural_privacy():
    pools = (main_path_params(max_servers=6, max_parts=30),
             trivial_params(max_servers=6, max_parts=30),
             plain_split_pool())
    with criterion(5, "structural-privacy"):
        for pool in pools:
            for params in pool:
                report = structural_audit(build_layout(params))
                assert report.key_single_use, params.describe()
                for c in report.coalitions:
                    assert c.leaked_parts <= params.leak, params.describe()


def test_criterion_6_entropy_certification():
    cases = ((3, 1, 4), (3, 3, 10), (3, 0, 1))
    with criterion(6, "entropy-certification"):
        start = time.perf_counter()
        for servers, leak, parts in cases:
            report = entropy_oracle(
                derive_params(servers, PrivacyBudget(leak, parts)), 1)
            for c in report.coalitions:
                assert c.mi_bits <= leak + MI_TOL, (servers, leak, parts)
            assert abs(report.residual_entropy_bits) <= MI_TOL
            assert report.decodable
        elapsed = time.perf_counter() - start
        assert elapsed < 120, f"oracle runs took {elapsed:.1f} s"


def test_criterion_7_serialization():
    def random_blob(rng):
        servers = rng.randint(2, 6)
        part_len = rng.randint(0, 9)
        return ShareBlob(
            server_index=rng.randint(1, servers),
            servers=servers,
            leak=rng.randint(0, 3),
            parts=rng.randint(4, 30),
            case=rng.choice(list(LayoutCase)),
            part_len=part_len,
            original_len=rng.randint(0, part_len * 30),
            payload=tuple(rng.randbytes(part_len)
                          for _ in range(rng.randint(0, 5))),
        )

    with criterion(7, "serialization"):
        golden = GOLDEN_SHARE.read_bytes()
        plan = plan_for(3, 1, 4)

        class Stream:
            data = bytearray([0x10, 0x20, 0x30, 0x40, 0x50])

            def randbytes(self, n):
                out = bytes(self.data[:n])
                del self.data[:n]
                return out

        blobs = encode(bytes([1, 2, 3, 4]), plan, rng=Stream())
        assert serialize_share(blobs[0]) == golden
        assert deserialize_share(golden) == blobs[0]

        from xorshard import ShareFormatError
        for pos in range(len(golden)):
            mutated = bytearray(golden)
            mutated[pos] ^= 0x80
            with pytest.raises(ShareFormatError):
                deserialize_share(bytes(mutated))

        rng = random.Random(0x5E1A)
        for _ in range(500):
            blob = random_blob(rng)
            assert deserialize_share(serialize_share(blob)) == blob


def test_criterion_8_cli_contract(tmp_path):
    def cli(*args, env_extra=None):
        env = {k: v for k, v in os.environ.items() if k != "XORSHARD_SEED"}
        if env_extra:
            env.update(env_extra)
        return subprocess.run(
            [sys.executable, "-m", "xorshard", *map(str, args)],
            capture_output=True, text=True, env=env, timeout=60)

    source = tmp_path / "input.bin"
    source.write_bytes(b"acceptance criterion eight")
    dirs = [tmp_path / f"srv{t}" for t in (1, 2, 3)]
    out = tmp_path / "restored.bin"

    with criterion(8, "cli-contract"):
        # success rows
        r = cli("encode", "--alpha", "3/10", "-T", "3", "--seed", "5",
                source, *dirs)
        assert r.returncode == 0 and "case=2" in r.stdout and "n_keys=11" in r.stdout
        r = cli("decode", "-o", out, *dirs)
        assert r.returncode == 0 and out.read_bytes() == source.read_bytes()
        assert cli("plan", "--alpha", "1/4", "-T", "3").returncode == 0
        assert cli("audit", "--alpha", "1/4", "-T", "3").returncode == 0
        assert cli("audit", "--entropy", "--part-bits", "1",
                   "--alpha", "1/4", "-T", "3").returncode == 0
        assert cli("rates", "--alpha", "3/10", "-T", "3").returncode == 0

        # usage rows
        assert cli("plan", "--alpha", "0.3", "-T", "3").returncode == 2
        assert cli("plan", "--alpha", "5/4", "-T", "3").returncode == 2
        assert cli("plan", "--alpha", "1/4", "-T", "1").returncode == 2
        assert cli("encode", "--alpha", "1/4", "-T", "3", source,
                   dirs[0], dirs[1]).returncode == 2
        assert cli("audit", "--entropy", "--part-bits", "0",
                   "--alpha", "1/4", "-T", "3").returncode == 2
        assert cli().returncode == 2

        # failure rows
        victim = next(dirs[1].glob("*.xrsh"))
        raw = bytearray(victim.read_bytes())
        raw[-1] ^= 0xFF
        victim.write_bytes(bytes(raw))
        assert cli("decode", "-o", out, *dirs).returncode == 1
        os.remove(victim)
        assert cli("decode", "-o", out, *dirs).returncode == 1
        assert cli("encode", "--alpha", "1/4", "-T", "3",
                   tmp_path / "ghost", *dirs).returncode == 1
        assert cli("audit", "--entropy", "--part-bits", "3",
                   "--alpha", "3/10", "-T", "3").returncode == 1
