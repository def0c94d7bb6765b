#include "lspgen/syntax/cfg.hpp"

#include <algorithm>

namespace lspgen::syntax {

namespace {

struct Pending {
    int from;
    EdgeLabel label;
};

using Frontier = std::vector<Pending>;

struct LoopContext {
    int continue_target;
    Frontier* break_frontier;
};

struct Builder {
    Cfg cfg;
    const LanguageAdapter& adapter;
    std::vector<LoopContext> loops;
    int last_terminator = -1;  // most recent node that left no frontier

    int add_node(CfgNodeKind kind, const core::Location& span,
                 std::optional<core::Location> condition = std::nullopt) {
        CfgNode node;
        node.id = static_cast<int>(cfg.nodes.size());
        node.kind = kind;
        node.span = span;
        node.condition_span = std::move(condition);
        cfg.nodes.push_back(node);
        return node.id;
    }

    void connect(const Frontier& frontier, int to,
                 std::optional<EdgeLabel> override_label = std::nullopt) {
        for (const auto& p : frontier) {
            cfg.edges.push_back(CfgEdge{p.from, to, override_label.value_or(p.label)});
        }
    }

    // Entry point for a new node: wires the live frontier to it, or, when
    // flow already terminated (dead code), tacks it behind the terminator so
    // every guard stays visible and reachable.
    Frontier enter(Frontier frontier, int node_id) {
        if (frontier.empty() && last_terminator >= 0) {
            cfg.edges.push_back(CfgEdge{last_terminator, node_id, EdgeLabel::seq});
        } else {
            connect(frontier, node_id);
        }
        return Frontier{{node_id, EdgeLabel::seq}};
    }

    bool is_simple(const SyntaxNode& s) const {
        return (s.kind == "statement" || s.kind == "error") &&
               s.child("conditional_expression") == nullptr;
    }

    Frontier visit_block(const std::vector<SyntaxNode>& stmts, Frontier frontier) {
        std::size_t i = 0;
        while (i < stmts.size()) {
            // Collapse a run of plain statements into one basic block.
            if (is_simple(stmts[i])) {
                std::size_t j = i;
                while (j + 1 < stmts.size() && is_simple(stmts[j + 1])) ++j;
                core::Location span = stmts[i].loc;
                span.end = stmts[j].loc.end;
                const int id = add_node(CfgNodeKind::statement, span);
                frontier = enter(std::move(frontier), id);
                i = j + 1;
                continue;
            }
            frontier = visit_statement(stmts[i], std::move(frontier));
            ++i;
        }
        return frontier;
    }

    Frontier visit_statement(const SyntaxNode& s, Frontier frontier) {
        if (s.kind == "if_statement") return visit_if(s, std::move(frontier));
        if (s.kind == "loop_statement") return visit_loop(s, std::move(frontier));
        if (s.kind == "switch_statement") return visit_switch(s, std::move(frontier));
        if (s.kind == "try_statement") return visit_try(s, std::move(frontier));
        if (s.kind == "block") return visit_block(s.children, std::move(frontier));
        if (s.kind == "statement_with_block") {
            const int id = add_node(CfgNodeKind::statement, s.loc);
            frontier = enter(std::move(frontier), id);
            if (const auto* block = s.child("block")) {
                frontier = visit_block(block->children, std::move(frontier));
            }
            return frontier;
        }
        if (s.kind == "return_statement" || s.kind == "raise_statement") {
            frontier = visit_ternaries(s, std::move(frontier));
            const int id = add_node(CfgNodeKind::statement, s.loc);
            frontier = enter(std::move(frontier), id);
            cfg.edges.push_back(CfgEdge{id, cfg.exit_id, EdgeLabel::seq});
            last_terminator = id;
            return {};
        }
        if (s.kind == "break_statement") {
            const int id = add_node(CfgNodeKind::statement, s.loc);
            frontier = enter(std::move(frontier), id);
            if (!loops.empty()) {
                loops.back().break_frontier->push_back({id, EdgeLabel::seq});
            } else {
                cfg.edges.push_back(CfgEdge{id, cfg.exit_id, EdgeLabel::seq});
            }
            last_terminator = id;
            return {};
        }
        if (s.kind == "continue_statement") {
            const int id = add_node(CfgNodeKind::statement, s.loc);
            frontier = enter(std::move(frontier), id);
            if (!loops.empty()) {
                cfg.edges.push_back(CfgEdge{id, loops.back().continue_target,
                                            EdgeLabel::loop_back});
            } else {
                cfg.edges.push_back(CfgEdge{id, cfg.exit_id, EdgeLabel::seq});
            }
            last_terminator = id;
            return {};
        }
        // Plain statement, possibly gated by conditional expressions.
        frontier = visit_ternaries(s, std::move(frontier));
        const int id = add_node(CfgNodeKind::statement, s.loc);
        return enter(std::move(frontier), id);
    }

    // A `cond ? a : b` (or `a if cond else b`) inside a statement becomes a
    // branch whose edges rejoin at the statement itself.
    Frontier visit_ternaries(const SyntaxNode& s, Frontier frontier) {
        for (const auto& child : s.children) {
            if (child.kind != "conditional_expression") continue;
            const auto* cond = child.child("condition");
            if (cond == nullptr) continue;
            const int id = add_node(CfgNodeKind::branch, child.loc, cond->loc);
            frontier = enter(std::move(frontier), id);
            frontier = Frontier{{id, EdgeLabel::true_branch}, {id, EdgeLabel::false_branch}};
        }
        return frontier;
    }

    Frontier visit_if(const SyntaxNode& s, Frontier frontier) {
        const auto* cond = s.child("condition");
        const auto* block = s.child("block");
        const auto* else_clause = s.child("else_clause");

        if (cond == nullptr) {
            // Degenerate/malformed if: treat as opaque statement.
            const int id = add_node(CfgNodeKind::statement, s.loc);
            frontier = enter(std::move(frontier), id);
            if (block != nullptr) frontier = visit_block(block->children, std::move(frontier));
            return frontier;
        }

        const int branch = add_node(CfgNodeKind::branch, s.loc, cond->loc);
        frontier = enter(std::move(frontier), branch);

        Frontier then_out;
        if (block != nullptr) {
            then_out = visit_block(block->children, Frontier{{branch, EdgeLabel::true_branch}});
        } else {
            then_out = Frontier{{branch, EdgeLabel::true_branch}};
        }

        Frontier else_out;
        if (else_clause != nullptr && !else_clause->children.empty()) {
            const auto& else_body = else_clause->children.front();
            else_out =
                visit_statement(else_body, Frontier{{branch, EdgeLabel::false_branch}});
        } else {
            else_out = Frontier{{branch, EdgeLabel::false_branch}};
        }

        if (then_out.empty() && else_out.empty()) return {};
        if (then_out.empty()) return else_out;
        if (else_out.empty()) return then_out;

        core::Location merge_span = s.loc;
        merge_span.start = merge_span.end;
        const int merge = add_node(CfgNodeKind::merge, merge_span);
        connect(then_out, merge);
        connect(else_out, merge);
        return Frontier{{merge, EdgeLabel::seq}};
    }

    Frontier visit_loop(const SyntaxNode& s, Frontier frontier) {
        const auto* cond = s.child("condition");
        const auto* block = s.child("block");
        const auto* else_clause = s.child("else_clause");

        Frontier breaks;
        if (cond != nullptr) {
            const int branch = add_node(CfgNodeKind::branch, s.loc, cond->loc);
            frontier = enter(std::move(frontier), branch);
            loops.push_back(LoopContext{branch, &breaks});
            Frontier body_out;
            if (block != nullptr) {
                body_out =
                    visit_block(block->children, Frontier{{branch, EdgeLabel::true_branch}});
            } else {
                body_out = Frontier{{branch, EdgeLabel::true_branch}};
            }
            loops.pop_back();
            connect(body_out, branch, EdgeLabel::loop_back);
            Frontier out{{branch, EdgeLabel::false_branch}};
            out.insert(out.end(), breaks.begin(), breaks.end());
            if (else_clause != nullptr && !else_clause->children.empty()) {
                out = visit_statement(else_clause->children.front(), std::move(out));
            }
            return out;
        }

        // Guard-less loop (`for {` in Go): the header anchors the cycle.
        const int header = add_node(CfgNodeKind::statement, s.loc);
        frontier = enter(std::move(frontier), header);
        loops.push_back(LoopContext{header, &breaks});
        Frontier body_out = block != nullptr
                                ? visit_block(block->children, std::move(frontier))
                                : std::move(frontier);
        loops.pop_back();
        connect(body_out, header, EdgeLabel::loop_back);
        if (breaks.empty()) last_terminator = header;
        return breaks;
    }

    Frontier visit_switch(const SyntaxNode& s, Frontier frontier) {
        Frontier arm_exits;
        Frontier pending = std::move(frontier);
        bool saw_default = false;

        for (const auto& clause : s.children) {
            if (clause.kind == "case_clause") {
                const auto* guard = clause.child("condition");
                const auto* block = clause.child("block");
                if (guard == nullptr) continue;
                const int branch = add_node(CfgNodeKind::branch, clause.loc, guard->loc);
                pending = enter(std::move(pending), branch);
                Frontier arm_out =
                    block != nullptr
                        ? visit_block(block->children, Frontier{{branch, EdgeLabel::true_branch}})
                        : Frontier{{branch, EdgeLabel::true_branch}};
                arm_exits.insert(arm_exits.end(), arm_out.begin(), arm_out.end());
                pending = Frontier{{branch, EdgeLabel::false_branch}};
            } else if (clause.kind == "default_clause") {
                saw_default = true;
                const auto* block = clause.child("block");
                Frontier arm_out = block != nullptr
                                       ? visit_block(block->children, std::move(pending))
                                       : std::move(pending);
                arm_exits.insert(arm_exits.end(), arm_out.begin(), arm_out.end());
                pending = {};
            }
        }
        if (!saw_default) {
            arm_exits.insert(arm_exits.end(), pending.begin(), pending.end());
            pending = {};
        }

        if (arm_exits.empty()) return {};
        if (arm_exits.size() == 1) return arm_exits;
        core::Location merge_span = s.loc;
        merge_span.start = merge_span.end;
        const int merge = add_node(CfgNodeKind::merge, merge_span);
        connect(arm_exits, merge);
        return Frontier{{merge, EdgeLabel::seq}};
    }

    Frontier visit_try(const SyntaxNode& s, Frontier frontier) {
        const std::size_t first_new_node = cfg.nodes.size();
        Frontier out;
        const SyntaxNode* try_block = nullptr;
        for (const auto& c : s.children) {
            if (c.kind == "block") {
                try_block = &c;
                break;
            }
        }
        if (try_block != nullptr && !try_block->children.empty()) {
            out = visit_block(try_block->children, std::move(frontier));
        } else {
            const int id = add_node(CfgNodeKind::statement, s.loc);
            out = enter(std::move(frontier), id);
        }
        // Handlers hang off the first node of the try body so they stay
        // reachable; precise throw points are out of scope for this CFG.
        int anchor = -1;
        if (cfg.nodes.size() > first_new_node) {
            anchor = cfg.nodes[first_new_node].id;
        }

        Frontier handler_exits;
        for (const auto& c : s.children) {
            if (c.kind != "handler_clause" || c.children.empty()) continue;
            if (!adapter.exception_edges || anchor < 0) continue;
            Frontier h_out = visit_statement(c.children.front(),
                                             Frontier{{anchor, EdgeLabel::exception}});
            handler_exits.insert(handler_exits.end(), h_out.begin(), h_out.end());
        }
        out.insert(out.end(), handler_exits.begin(), handler_exits.end());

        for (const auto& c : s.children) {
            if (c.kind == "finally_clause" && !c.children.empty()) {
                out = visit_statement(c.children.front(), std::move(out));
            }
        }
        return out;
    }
};

}  // namespace

Cfg build_cfg(const SyntaxNode& root, const LanguageAdapter& adapter) {
    Builder b{Cfg{}, adapter, {}, -1};
    core::Location entry_span = root.loc;
    entry_span.end = entry_span.start;
    core::Location exit_span = root.loc;
    exit_span.start = exit_span.end;

    b.cfg.entry_id = b.add_node(CfgNodeKind::entry, entry_span);
    b.cfg.exit_id = b.add_node(CfgNodeKind::exit, exit_span);

    Frontier out = b.visit_block(root.children, Frontier{{b.cfg.entry_id, EdgeLabel::seq}});
    b.connect(out, b.cfg.exit_id);

    // An empty body still flows entry -> exit.
    if (b.cfg.edges.empty()) {
        b.cfg.edges.push_back(CfgEdge{b.cfg.entry_id, b.cfg.exit_id, EdgeLabel::seq});
    }
    return b.cfg;
}

std::vector<core::Location> condition_spans(const Cfg& cfg) {
    std::vector<core::Location> spans;
    for (const auto& n : cfg.nodes) {
        if (n.kind == CfgNodeKind::branch && n.condition_span) {
            spans.push_back(*n.condition_span);
        }
    }
    std::sort(spans.begin(), spans.end(), [](const core::Location& a, const core::Location& b) {
        if (a.start != b.start) return a.start < b.start;
        return a.end < b.end;
    });
    spans.erase(std::unique(spans.begin(), spans.end()), spans.end());
    return spans;
}

const char* to_string(CfgNodeKind kind) {
    switch (kind) {
        case CfgNodeKind::entry: return "entry";
        case CfgNodeKind::exit: return "exit";
        case CfgNodeKind::statement: return "statement";
        case CfgNodeKind::branch: return "branch";
        case CfgNodeKind::merge: return "merge";
    }
    return "statement";
}

const char* to_string(EdgeLabel label) {
    switch (label) {
        case EdgeLabel::seq: return "seq";
        case EdgeLabel::true_branch: return "true";
        case EdgeLabel::false_branch: return "false";
        case EdgeLabel::loop_back: return "loop_back";
        case EdgeLabel::exception: return "exception";
    }
    return "seq";
}

}  // namespace lspgen::syntax
