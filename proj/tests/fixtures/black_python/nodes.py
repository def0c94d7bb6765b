"""Syntax-tree node helpers for the formatter fixtures."""

import tokens
from pytree import Leaf


VARARGS_PARENTS = {"typedargslist", "varargslist", "arglist"}
UNARY_OPERATORS = {tokens.PLUS, tokens.MINUS, tokens.TILDE}
TEST_DESCENDANTS = {"comparison", "and_test", "or_test", "not_test"}
BRACKETS = {tokens.LPAR: tokens.RPAR, tokens.LSQB: tokens.RSQB, tokens.LBRACE: tokens.RBRACE}


def is_vararg(leaf, within):
    no_commas = leaf.value == "*" or leaf.value == "**"
    if not no_commas:
        return False
    parent = leaf.parent
    if parent is None:
        return False
    return parent.type in within


def is_unary(leaf):
    if leaf.type not in UNARY_OPERATORS:
        return False
    parent = leaf.parent
    if parent is None:
        return True
    return parent.type not in TEST_DESCENDANTS


def child_towards(ancestor, descendant):
    node = descendant
    while node.parent is not ancestor:
        if node.parent is None:
            return None
        node = node.parent
    return node


def preceding_leaf(node):
    while node is not None:
        index = node.index_in_parent()
        if index > 0:
            sibling = node.parent.children[index - 1]
            return last_leaf_of(sibling)
        node = node.parent
    return None


def last_leaf_of(node):
    while node.children:
        node = node.children[-1]
    return node


def bracket_depth_of(leaf):
    depth = 0
    node = leaf
    while node.parent is not None:
        if node.parent.type in BRACKETS:
            depth = depth + 1
        node = node.parent
    return depth


def container_of(leaf):
    container = leaf
    while container.parent is not None:
        parent = container.parent
        if len(parent.children) != 1:
            break
        container = parent
    return container


def describe_tree(node, indent=0):
    lines = [" " * indent + node.type]
    for child in node.children:
        lines.extend(describe_tree(child, indent + 2))
    return lines


def count_leaves(node):
    if not node.children:
        return 1
    total = 0
    for child in node.children:
        total = total + count_leaves(child)
    return total
