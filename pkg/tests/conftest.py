import itertools

import pytest

from coldboot.bits import BitString
from coldboot.channel import ChannelParams
from coldboot.enumeration import CandidateTable, ChunkCandidate, EnumerationParams
from coldboot.lowmc import LowMCParams, instantiate


def table_from_weights(weight_lists, block_bits=4):
    """Synthetic table: list i holds values 0..len-1 with the given (sorted) weights."""
    xi = len(weight_lists)
    lists = [[ChunkCandidate(wt, BitString.from_int(v, block_bits)) for v, wt in enumerate(sorted(ws))]
             for ws in weight_lists]
    mu = max(len(ws) for ws in weight_lists)
    params = EnumerationParams(W=xi * block_bits, w=block_bits, eta=1, mu=mu)
    return CandidateTable(lists, params, ChannelParams(0.001, 0.05))


def census(table):
    """Every combination as (total weight, picks) in lexicographic pick order."""
    ranges = [range(len(l)) for l in table.lists]
    ws = table.weights()
    return [(sum(ws[i][j] for i, j in enumerate(p)), p) for p in itertools.product(*ranges)]


@pytest.fixture(scope="session")
def desk_cipher():
    return instantiate(LowMCParams(n=16, k=16, m=2, r=4, seed=7))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for num in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[num])
