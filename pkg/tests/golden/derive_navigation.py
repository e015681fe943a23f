"""Independent derivation of annotation attachment from the raw SR event list.

Used to compute (and re-check) the committed navigation golden table.  It
rebuilds parent structure by replaying `sr_events` output with a plain stack
of dict nodes, then applies the navigation semantics as specified:

* anchor: the last shift leaf strictly before the annotation offset;
* `+`: advance to the next shift leaf;
* `@`: nearest proper ancestor reduce node;
* `&`: nearest proper ancestor whose rule is tagged monadic.

It never touches the forest implementation, only the event list, the token
stream, the rule arities and the monadic tag set.
"""

from __future__ import annotations

from bisect import bisect_left


def replay(events, tokens):
    """Rebuild the forest shape as dict nodes from the event list."""
    stack: list[dict] = []
    leaves: list[dict] = []
    for idx, ev in enumerate(events):
        if ev[0] == "S":
            tok = tokens[ev[1]]
            node = {"kind": "shift", "tok_index": ev[1], "start": tok.start,
                    "end": tok.end, "parent": None, "event": idx}
            leaves.append(node)
            stack.append(node)
        else:
            _, rule_id, arity = ev
            children = stack[len(stack) - arity:] if arity else []
            if arity:
                del stack[len(stack) - arity:]
                start = children[0]["start"]
                end = children[-1]["end"]
            else:
                start = end = stack[-1]["end"] if stack else 0
            node = {"kind": "reduce", "rule_id": rule_id, "start": start,
                    "end": end, "parent": None, "children": children, "event": idx}
            for ch in children:
                ch["parent"] = node
            stack.append(node)
    return leaves


def derive_focus(events, tokens, monadic, annotation_offset, plus_count, ancestry):
    leaves = replay(events, tokens)
    starts = [tokens[leaf["tok_index"]]["start"] if isinstance(tokens[0], dict)
              else tokens[leaf["tok_index"]].start for leaf in leaves]
    idx = bisect_left(starts, annotation_offset) - 1
    if idx < 0:
        raise ValueError("annotation precedes all tokens")
    idx += plus_count
    if idx >= len(leaves):
        raise ValueError("token navigation past the last shift")
    node = leaves[idx]
    for step in ancestry:
        node = node["parent"]
        if step == "&":
            while node is not None and node["rule_id"] not in monadic:
                node = node["parent"]
        if node is None:
            raise ValueError("navigation above the root")
    return node


def describe(node, tokens, rule_display) -> str:
    if node["kind"] == "shift":
        return f"shift\t{tokens[node['tok_index']].text}\t{node['start']}-{node['end']}"
    return f"reduce\t{rule_display(node['rule_id'])}\t{node['start']}-{node['end']}"
