"""Independent invariant audit of a finished zone graph (shared by tests)."""

from timedrel import _kernel
from timedrel.zone import Zone, delay_preds, edge_preds


def _covered(z: Zone, parts) -> bool:
    rest = [z]
    for p in parts:
        rest = [r for q in rest for r in q.subtract(p)]
    return not rest


def audit(G) -> list[str]:
    """Return a list of violated invariants (empty when the graph is sound)."""
    problems = []
    A = G.automaton
    nodes = G.nodes
    for nd in nodes:
        if nd.zone.is_empty():
            problems.append(f"node {nd.id} empty")
        if _kernel.close(nd.zone.m, nd.zone.n) != nd.zone.m:
            problems.append(f"node {nd.id} not canonical")
    # per-location disjointness
    for a in nodes:
        for b in nodes:
            if a.id < b.id and a.location == b.location and not a.zone.intersect(b.zone).is_empty():
                problems.append(f"nodes {a.id},{b.id} overlap")
    # pre-stability w.r.t. delay and edge predecessors
    for tgt in nodes:
        dp = delay_preds(tgt.zone)
        for src in G.nodes_at(tgt.location):
            inter = src.zone.intersect(dp)
            if not inter.is_empty() and not dp.includes(src.zone):
                problems.append(f"node {src.id} not delay-pre-stable w.r.t. {tgt.id}")
        for e in A.edges:
            if e.target != tgt.location:
                continue
            gz, resets = G.edge_info(e)
            ep = edge_preds(tgt.zone, gz, resets)
            for src in G.nodes_at(e.source):
                inter = src.zone.intersect(ep)
                if not inter.is_empty() and not ep.includes(src.zone):
                    problems.append(f"node {src.id} not pre-stable w.r.t. edge into {tgt.id}")
    # stored action edges are exactly the non-empty predecessor overlaps
    stored = {(s, a, t) for s, a, t, _ in G.action_edges}
    for e in A.edges:
        gz, resets = G.edge_info(e)
        for tgt in G.nodes_at(e.target):
            ep = edge_preds(tgt.zone, gz, resets)
            for src in G.nodes_at(e.source):
                if not src.zone.intersect(ep).is_empty() and (src.id, e.action, tgt.id) not in stored:
                    problems.append(f"missing edge {src.id}-{e.action}->{tgt.id}")
    # delay successors form a chain covering the future
    imm = {}
    for s, t in G.delay_edges:
        if s in imm:
            problems.append(f"node {s} has two immediate delay successors")
        imm[s] = t
    for nd in nodes:
        chain = G.delay_chain(nd.id)
        if chain[0] != nd.id or len(set(chain)) != len(chain):
            problems.append(f"bad delay chain at {nd.id}")
        if not _covered(nd.zone.up(), [nodes[c].zone for c in chain]):
            problems.append(f"future of {nd.id} escapes its delay chain")
        for e in A.outgoing(nd.location):
            gz, resets = G.edge_info(e)
            img = nd.zone.intersect(gz)
            if img.is_empty():
                continue
            img = img.reset(resets)
            if not _covered(img, [t.zone for t in G.nodes_at(e.target)]):
                problems.append(f"successor of {nd.id} via {e.action} not covered")
    return problems
