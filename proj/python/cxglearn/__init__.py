"""Constraint-based construction grammar induction and register comparison.

Thin re-export of the compiled extension; see the project README for the
corpus/grammar file formats and the CLI.
"""

try:
    from ._core import *  # noqa: F401,F403
    from ._core import __doc__ as _core_doc
except ImportError:  # running against a build tree: _core.so on sys.path
    from _core import *  # noqa: F401,F403
    from _core import __doc__ as _core_doc

__doc__ = _core_doc or __doc__
