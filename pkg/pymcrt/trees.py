# Copyright (c) 2024 The pymcrt developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-3-Clause

"""Planted plane trees and marked history trees.

   A planted plane tree is a rooted ordered tree whose root is a leaf,
   attached by a single edge. It is stored as nested tuples: a leaf is the
   empty tuple, and an inner vertex is the tuple of its ordered children. The
   root leaf is implicit, so the stored value is the vertex the root edge
   leads to, e.g. ``()`` is the single-leaf tree and ``((), ())`` the cherry.

   A history tree is the subtree spanned by the root and a set of marked
   leaves. Its branches are the maximal paths with no branching point, in
   depth-first preorder with the root branch first. The text format wraps
   the shape of the history and the branch lengths::

     (((1)(2))L=[2,1,1])

   where a branch is either a leaf holding its comma-separated mark labels,
   such as ``(1,2)``, or the sequence of its child branches, such as
   ``((1)(2))``.
"""

#pylint: disable-msg=invalid-name
#pylint: disable-msg=too-many-locals

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import product
from logging import getLogger
from re import compile as recompile
from typing import (Any, Dict, Iterable, Iterator, List, NamedTuple,
                    Optional, Sequence, Tuple)
from .misc import fraction_str, to_fraction


PlaneTree = Tuple['PlaneTree', ...]
"""Planted plane tree, as nested tuples."""


class HistoryError(ValueError):
    """Malformed history or shape, or violated history invariant"""


def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Ordered decompositions of total into positive integers.

       >>> list(compositions(4, 2))
       [(1, 3), (2, 2), (3, 1)]
    """
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _plane_trees(leaves: int, degrees: Tuple[int, ...]) -> Tuple[PlaneTree,
                                                                 ...]:
    if leaves == 1:
        trees = [()]
    else:
        trees = []
    for degree in degrees:
        if degree > leaves:
            continue
        for sizes in compositions(leaves, degree):
            for children in product(*(_plane_trees(size, degrees)
                                      for size in sizes)):
                trees.append(tuple(children))
    return tuple(trees)


def plane_trees(leaves: int, degrees: Iterable[int]) -> Tuple[PlaneTree, ...]:
    """All the planted plane trees with a given leaf count, whose inner
       vertices have an out-degree in degrees.

       >>> len(plane_trees(4, [2]))
       5
       >>> plane_trees(3, [2, 3])
       (((), ((), ())), (((), ()), ()), ((), (), ()))

       :param leaves: the count of non-root leaves, at least 1
       :param degrees: the allowed out-degrees, each at least 2
    """
    degrees = tuple(sorted(set(degrees)))
    if any(d < 2 for d in degrees):
        raise HistoryError(f'Invalid out-degrees: {degrees}')
    if leaves < 1:
        raise HistoryError(f'Invalid leaf count: {leaves}')
    return _plane_trees(leaves, degrees)


def leaf_count(tree: PlaneTree) -> int:
    """Count of non-root leaves of a planted plane tree."""
    if not tree:
        return 1
    return sum(leaf_count(child) for child in tree)


def vertex_degrees(tree: PlaneTree) -> Counter:
    """Count of inner vertices per out-degree.

       >>> vertex_degrees(((), ((), ())))
       Counter({2: 2})
    """
    counter = Counter()
    stack = [tree]
    while stack:
        node = stack.pop()
        if node:
            counter[len(node)] += 1
            stack.extend(node)
    return counter


def leaf_depths(tree: PlaneTree) -> List[int]:
    """Distance of each non-root leaf to the root leaf, in plane order.

       >>> leaf_depths(((), ((), ())))
       [2, 3, 3]
    """
    depths = []

    def _walk(node, depth):
        if not node:
            depths.append(depth)
            return
        for child in node:
            _walk(child, depth + 1)

    _walk(tree, 1)
    return depths


def format_tree(tree: PlaneTree) -> str:
    """Compact text form of a plane tree, ``*`` for a leaf and ``d(...)``
       for an inner vertex of out-degree d.

       >>> format_tree(((), ((), (), ())))
       '2(*,3(*,*,*))'
    """
    if not tree:
        return '*'
    return f"{len(tree)}({','.join(format_tree(child) for child in tree)})"


def parse_tree(text: str) -> PlaneTree:
    """Parse the compact text form of a plane tree.

       >>> parse_tree('2(*,2(*,*))')
       ((), ((), ()))
    """
    text = text.strip()
    tree, pos = _parse_tree(text, 0)
    if pos != len(text):
        raise HistoryError(f'Trailing characters in shape "{text}"')
    return tree


def _parse_tree(text: str, pos: int) -> Tuple[PlaneTree, int]:
    if text.startswith('*', pos):
        return (), pos + 1
    end = pos
    while end < len(text) and text[end].isdigit():
        end += 1
    if end == pos or not text.startswith('(', end):
        raise HistoryError(f'Invalid shape "{text}" at {pos}')
    degree = int(text[pos:end])
    pos = end + 1
    children = []
    while True:
        child, pos = _parse_tree(text, pos)
        children.append(child)
        if text.startswith(',', pos):
            pos += 1
            continue
        if text.startswith(')', pos):
            pos += 1
            break
        raise HistoryError(f'Invalid shape "{text}" at {pos}')
    if len(children) != degree or degree < 2:
        raise HistoryError(f'Inconsistent degree {degree} in shape "{text}"')
    return tuple(children), pos


class HistoryNode(NamedTuple):
    """Node of a history shape, at the lower end of a branch.

       A leaf holds its sorted, non-empty mark labels and no child. A
       branching point holds no mark and at least two children.
    """
    marks: Tuple[int, ...] = ()
    children: Tuple['HistoryNode', ...] = ()

    @property
    def is_leaf(self) -> bool:
        """Tell whether the node is a marked leaf."""
        return not self.children

    def walk(self) -> Iterator['HistoryNode']:
        """Depth-first preorder traversal."""
        yield self
        for child in self.children:
            yield from child.walk()

    def __str__(self) -> str:
        if self.is_leaf:
            return f"({','.join(str(m) for m in self.marks)})"
        return f"({''.join(str(c) for c in self.children)})"


class HistoryTree:
    """History tree: a marked shape and the lengths of its branches.

       :param shape: the node at the lower end of the root branch
       :param lengths: the branch lengths, in depth-first preorder
    """

    def __init__(self, shape: HistoryNode, lengths: Sequence[Any]):
        self._shape = shape
        self._lengths = tuple(self._check_length(x) for x in lengths)
        self._p = Counter()
        labels = []
        branches = 0
        for node in shape.walk():
            branches += 1
            if node.is_leaf:
                if not node.marks:
                    raise HistoryError('Unmarked history leaf')
                labels.extend(node.marks)
            else:
                if len(node.children) < 2:
                    raise HistoryError('History branching point with a '
                                       'single child')
                if node.marks:
                    raise HistoryError('Marks on a history branching point')
                self._p[len(node.children)] += 1
        if sorted(labels) != list(range(1, len(labels) + 1)):
            raise HistoryError(f'Marks are not a partition of 1..m: '
                               f'{sorted(labels)}')
        if len(self._lengths) != branches:
            raise HistoryError(f'Expected {branches} branch lengths, got '
                               f'{len(self._lengths)}')
        self._m = len(labels)

    @classmethod
    def _check_length(cls, value: Any) -> Any:
        if isinstance(value, str):
            value = to_fraction(value)
        if not value > 0:
            raise HistoryError(f'Invalid branch length: {value}')
        return value

    @classmethod
    def from_text(cls, text: str) -> 'HistoryTree':
        """Parse the text form of a history."""
        shape, lengths = parse_history(text)
        return cls(shape, lengths)

    @property
    def shape(self) -> HistoryNode:
        """The marked shape."""
        return self._shape

    @property
    def lengths(self) -> Tuple[Any, ...]:
        """Branch lengths, in depth-first preorder."""
        return self._lengths

    @property
    def total_length(self) -> Any:
        """Sum of the branch lengths."""
        return sum(self._lengths)

    @property
    def m(self) -> int:
        """Count of marks."""
        return self._m

    @property
    def p(self) -> Dict[int, int]:
        """Count of branching points per out-degree i, i.e. of (i+1)-valent
           vertices."""
        return dict(sorted(self._p.items()))

    @property
    def p0(self) -> int:
        """Count of history leaves."""
        return 1 + sum((i - 1) * pi for i, pi in self._p.items())

    @property
    def n(self) -> int:
        """Count of branches."""
        return len(self._lengths)

    @property
    def degenerate(self) -> bool:
        """Tell whether some leaf holds more than one mark."""
        return self._m > self.p0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HistoryTree):
            return NotImplemented
        return (self._shape, self._lengths) == (other.shape, other.lengths)

    def __hash__(self) -> int:
        return hash((self._shape, self._lengths))

    def __str__(self) -> str:
        return format_history(self._shape, self._lengths)

    def __repr__(self) -> str:
        return f'{self.__class__.__name__}({str(self)!r})'


class DiscreteHistory(HistoryTree):
    """History tree with integral branch lengths, each at least 1."""

    @classmethod
    def _check_length(cls, value: Any) -> Any:
        if isinstance(value, str):
            value = to_fraction(value)
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise HistoryError(f'Non-integral branch length: {value}')
            value = value.numerator
        if not isinstance(value, int) or value < 1:
            raise HistoryError(f'Invalid branch length: {value}')
        return value


_LENGTHS_CRE = recompile(r'^L=\[([^\]]*)\]\)$')


def parse_history(text: str) -> Tuple[HistoryNode, List[Fraction]]:
    """Parse the text form of a history.

       >>> shape, lengths = parse_history('(((1)(2))L=[2,1,1])')
       >>> str(shape), lengths
       ('((1)(2))', [Fraction(2, 1), Fraction(1, 1), Fraction(1, 1)])

       :param text: the history, e.g. ``((1,2)L=[3])``
       :return: the shape and the branch lengths, as exact rationals
    """
    text = ''.join(text.split())
    if not text.startswith('('):
        raise HistoryError(f'Invalid history "{text}"')
    shape, pos = _parse_branch(text, 1)
    mo = _LENGTHS_CRE.match(text[pos:])
    if not mo:
        raise HistoryError(f'Invalid history lengths in "{text}"')
    try:
        lengths = [to_fraction(x) for x in mo.group(1).split(',') if x]
    except ValueError as exc:
        raise HistoryError(f'Invalid history lengths in "{text}"') from exc
    return shape, lengths


def _parse_branch(text: str, pos: int) -> Tuple[HistoryNode, int]:
    if not text.startswith('(', pos):
        raise HistoryError(f'Invalid history "{text}" at {pos}')
    pos += 1
    if text.startswith('(', pos):
        children = []
        while text.startswith('(', pos):
            child, pos = _parse_branch(text, pos)
            children.append(child)
        if not text.startswith(')', pos):
            raise HistoryError(f'Invalid history "{text}" at {pos}')
        return HistoryNode((), tuple(children)), pos + 1
    end = text.find(')', pos)
    if end < 0:
        raise HistoryError(f'Unterminated history leaf in "{text}"')
    try:
        marks = [int(m) for m in text[pos:end].split(',')]
    except ValueError as exc:
        raise HistoryError(f'Invalid marks in "{text}" at {pos}') from exc
    return HistoryNode(tuple(sorted(marks))), end + 1


def format_history(shape: HistoryNode, lengths: Sequence[Any]) -> str:
    """Text form of a history.

       >>> format_history(HistoryNode((1, 2)), [3])
       '((1,2)L=[3])'
    """
    return f"({shape}L=[{','.join(_length_str(x) for x in lengths)}])"


def _length_str(value: Any) -> str:
    if isinstance(value, (int, Fraction)):
        return fraction_str(value)
    return str(value)


def induced_history(tree: PlaneTree,
                    marked: Sequence[int]) -> DiscreteHistory:
    """History spanned by the root and a tuple of marked leaves.

       >>> str(induced_history(((), ((), ())), [0, 2]))
       '(((1)(2))L=[1,1,2])'

       :param tree: the planted plane tree
       :param marked: for each mark label 1..m, the plane index of the leaf
                      it marks; a leaf may receive several marks
    """
    if not marked:
        raise HistoryError('A history needs at least one mark')
    leaf_marks: Dict[int, List[int]] = {}
    for label, leaf in enumerate(marked, start=1):
        leaf_marks.setdefault(leaf, []).append(label)
    counter = [0]

    # returns (node, branch length below the vertex, [(node, length)...])
    def _induce(node) -> Optional[Tuple[HistoryNode, int, list]]:
        if not node:
            index = counter[0]
            counter[0] += 1
            labels = leaf_marks.get(index)
            if not labels:
                return None
            return HistoryNode(tuple(labels)), 0, []
        spans = [span for span in (_induce(child) for child in node)
                 if span is not None]
        if not spans:
            return None
        if len(spans) == 1:
            hnode, dist, sub = spans[0]
            return hnode, dist + 1, sub
        children = []
        branches = []
        for hnode, dist, sub in spans:
            children.append(hnode)
            branches.append((dist + 1, sub))
        return HistoryNode((), tuple(children)), 0, branches

    span = _induce(tree)
    if counter[0] <= max(marked) or min(marked) < 0:
        raise HistoryError(f'Invalid marked leaves: {list(marked)}')
    hnode, dist, branches = span
    lengths = [dist + 1]

    def _flatten(subs):
        for length, sub in subs:
            lengths.append(length)
            _flatten(sub)

    _flatten(branches)
    return DiscreteHistory(hnode, lengths)


def _label_assignments(m: int, leaves: int) -> Iterator[Tuple[Tuple[int, ...],
                                                              ...]]:
    """Surjective assignments of the labels 1..m onto ordered leaves."""
    for target in product(range(leaves), repeat=m):
        if len(set(target)) != leaves:
            continue
        slots = [[] for _ in range(leaves)]
        for label, leaf in enumerate(target, start=1):
            slots[leaf].append(label)
        yield tuple(tuple(slot) for slot in slots)


def _mark_shape(tree: PlaneTree, slots: Iterator[Tuple[int, ...]]) \
        -> HistoryNode:
    if not tree:
        return HistoryNode(next(slots))
    return HistoryNode((), tuple(_mark_shape(child, slots)
                                 for child in tree))


def enumerate_histories(m: int, max_total_length: int, max_degree: int,
                        degenerate: bool = True) -> Iterator[DiscreteHistory]:
    """Generate every labeled plane history with m marks.

       :param m: the count of marks
       :param max_total_length: upper bound on the sum of branch lengths
       :param max_degree: the largest out-degree of a branching point
       :param degenerate: whether to include leaves with several marks
    """
    log = getLogger('pymcrt.trees')
    if m < 1:
        raise HistoryError(f'Invalid mark count: {m}')
    degrees = range(2, max_degree + 1)
    count = 0
    for leaves in range(1 if degenerate else m, m + 1):
        for tree in plane_trees(leaves, degrees):
            branches = leaves + sum(vertex_degrees(tree).values())
            for slots in _label_assignments(m, leaves):
                shape = _mark_shape(tree, iter(slots))
                for total in range(branches, max_total_length + 1):
                    for lengths in compositions(total, branches):
                        count += 1
                        yield DiscreteHistory(shape, lengths)
    log.debug('Enumerated %d histories with %d marks', count, m)
