# -*- coding: utf-8 -*-
"""
Created the 13/10/2026

Edge based shortest paths on free-flow traversal time.

A path starts on the origin edge and ends on the destination edge; its cost is the free-flow time of every
edge after the origin, so the identity path costs nothing. Among equal-cost paths the lexicographically
smallest edge-id sequence wins; costs within a relative 1e-12 count as equal so summation order cannot break a tie.
"""
import math
from heapq import heappush, heappop
from itertools import count
from typing import Dict, List, Sequence, Tuple, TYPE_CHECKING

from transit_modeshift.errors import NoPathError, ReferentialIntegrityError

if TYPE_CHECKING:
    from transit_modeshift.network.graph import NetworkGraph

COST_REL_TOL = 1e-12


def _same_cost(first: float, second: float) -> bool:
    return math.isclose(first, second, rel_tol=COST_REL_TOL, abs_tol=COST_REL_TOL)


class Router:
    """ Single-source search trees cached per origin edge. The graph is immutable so the trees never expire."""

    def __init__(self, graph: 'NetworkGraph'):
        self._graph = graph
        self._trees: Dict[str, Tuple[Dict[str, float], Dict[str, str]]] = {}

    def _path_to(self, pred: Dict[str, str], origin: str, edge_id: str) -> List[str]:
        path = [edge_id]
        while path[-1] != origin:
            path.append(pred[path[-1]])
        path.reverse()
        return path

    def tree(self, origin: str) -> Tuple[Dict[str, float], Dict[str, str]]:
        """ Dijkstra from origin: (cost per reached edge, predecessor per reached edge)"""
        if origin in self._trees:
            return self._trees[origin]
        graph = self._graph
        graph.edge(origin)
        dist: Dict[str, float] = {}
        seen = {origin: 0.}
        pred: Dict[str, str] = {}
        c = count()
        fringe = [(0., next(c), origin)]
        while fringe:
            d, _, edge_id = heappop(fringe)
            if edge_id in dist:
                continue
            dist[edge_id] = d
            for succ in graph.successors(edge_id):
                if succ in dist:
                    continue
                succ_cost = d + graph.edge(succ).free_flow_time
                if succ in seen and _same_cost(succ_cost, seen[succ]):
                    if self._path_to(pred, origin, edge_id) < self._path_to(pred, origin, pred[succ]):
                        pred[succ] = edge_id
                elif succ not in seen or succ_cost < seen[succ]:
                    seen[succ] = succ_cost
                    pred[succ] = edge_id
                    heappush(fringe, (succ_cost, next(c), succ))
        self._trees[origin] = (dist, pred)
        return self._trees[origin]

    def cost(self, origin: str, dest: str) -> float:
        """ Free-flow time from the end of origin to the end of dest, inf when unreachable"""
        self._graph.edge(dest)
        return self.tree(origin)[0].get(dest, math.inf)

    def path(self, origin: str, dest: str) -> List[str]:
        self._graph.edge(dest)
        dist, pred = self.tree(origin)
        if dest not in dist:
            raise NoPathError(f'no directed path from edge {origin!r} to edge {dest!r}')
        return self._path_to(pred, origin, dest)


def shortest_path(graph: 'NetworkGraph', origin_edge: str, dest_edge: str) -> List[str]:
    """ Ordered edge ids from origin_edge to dest_edge minimizing the free-flow traversal time

    Raises
    ------
    ReferentialIntegrityError: unknown edge
    NoPathError: dest_edge unreachable from origin_edge
    """
    return graph.router.path(origin_edge, dest_edge)


def path_cost(graph: 'NetworkGraph', path: Sequence[str]) -> float:
    """ Free-flow time of a path, origin edge excluded"""
    return sum(graph.edge(edge_id).free_flow_time for edge_id in path[1:])
