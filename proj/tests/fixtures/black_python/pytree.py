"""Minimal parse-tree node classes for the formatter fixtures."""


class Node:
    def __init__(self, type, children=None, parent=None):
        self.type = type
        self.children = children if children is not None else []
        self.parent = parent
        for child in self.children:
            child.parent = self

    def append_child(self, child):
        child.parent = self
        self.children.append(child)

    def index_in_parent(self):
        if self.parent is None:
            return 0
        position = 0
        for sibling in self.parent.children:
            if sibling is self:
                return position
            position = position + 1
        return 0

    def depth(self):
        level = 0
        node = self
        while node.parent is not None:
            level = level + 1
            node = node.parent
        return level

    def pre_order(self):
        yield self
        for child in self.children:
            for node in child.pre_order():
                yield node


class Leaf(Node):
    def __init__(self, type, value, parent=None):
        Node.__init__(self, type, [], parent)
        self.value = value

    def clone(self):
        return Leaf(self.type, self.value)

    def is_whitespace(self):
        return self.value.strip() == ""

    def width(self):
        return len(self.value)


def make_chain(types):
    root = Node(types[0])
    node = root
    for type in types[1:]:
        child = Node(type)
        node.append_child(child)
        node = child
    return root
