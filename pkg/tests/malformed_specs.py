"""Twenty malformed spec sources with hand-derived error positions.

Shared by the unit tests and the acceptance suite. Each entry is
(source, error class name, line, column); columns are 1-based and were
worked out by counting characters in the source, not by running the parser.
"""

MALFORMED_SPECS = [
    # lexical and structural
    ("", "ParseError", 1, 1),  # empty program: 'save' expected at EOF
    ("let = near(channel(0))", "ParseError", 1, 5),  # '=' where a name belongs
    ("let x near(x)", "ParseError", 1, 7),  # missing '=' after the let name
    ("save label near(channel(0))", "ParseError", 1, 6),  # unquoted output name
    ('save "a" channel(0) save "a" channel(0)', "ParseError", 1, 26),  # duplicate save
    ('let near = channel(0)\nsave "x" near', "ParseError", 1, 5),  # builtin as let name
    ('let a = channel(0)\nlet a = channel(1)\nsave "x" a', "ParseError", 2, 5),  # duplicate let
    ('save "x" channel(0', "ParseError", 1, 19),  # unclosed call at end of input
    ('save "x" near(channel(0), channel(1))', "ParseError", 1, 10),  # near takes 1 argument
    ('save "x" touch(channel(0))', "ParseError", 1, 10),  # touch takes 2 arguments
    ('save "x" near', "ParseError", 1, 10),  # builtin used without arguments
    ('save "x" channel(0) @', "LexError", 1, 21),  # character outside the language
    ('save "x" "oops"', "ParseError", 1, 10),  # string where an expression belongs
    ('save "x\nchannel(0)', "LexError", 1, 6),  # string not closed before newline
    ('save "x" a < b < c', "ParseError", 1, 16),  # comparisons do not chain
    # well-formed syntax, ill-sorted
    ('save "x" 1 = 2', "SortError", 1, 12),  # comparing two plain numbers
    ('save "x" !dt(channel(0))', "SortError", 1, 10),  # negating a scalar field
    ('save "x" dt(channel(0))', "SortError", 1, 10),  # saving a scalar field
    ('save "x" channel(0) + 1', "SortError", 1, 21),  # arithmetic on a mask
    ('save "x" near(dt(channel(0)))', "SortError", 1, 15),  # near over a scalar field
]
