"""Labeled summary-stage outputs: (name, text, expected reason or None, expected chaining gaps)."""

CLEAN = '{"legs":[{"mode":"subway","line":"G","from":"A","to":"D"}]}'

SUMMARY_CORPUS = [
    ("clean", CLEAN, None, []),
    ("prose-wrapped", "Sure! Here is your route: " + CLEAN, "ExtraProse", None),
    ("bad-term", '{"legs":[{"mode":"teleport","from":"A","to":"D"}]}', "BadModeTerm", None),
    ("empty", "", "NotAnObject", None),
    ("non-object", '["subway", "G", "A", "D"]', "NotAnObject", None),
    ("missing-field", '{"legs":[{"mode":"subway","line":"G","from":"A"}]}', "MissingField", None),
    ("walk-only", '{"legs":[{"mode":"walk","from":"A","to":"B"}]}', None, []),
    ("chained",
     '{"legs":[{"mode":"subway","line":"R","from":"A","to":"B"},'
     '{"mode":"walk","from":"B","to":"E"},{"mode":"subway","line":"G","from":"E","to":"D"}]}',
     None, []),
    ("non-chained",
     '{"legs":[{"mode":"subway","line":"R","from":"A","to":"B"},'
     '{"mode":"subway","line":"G","from":"E","to":"D"}]}',
     None, [(0, 1)]),
]
