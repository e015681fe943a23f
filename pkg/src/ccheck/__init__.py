"""ccheck: a C11 frontend toolkit with markup reports and executable semantics.

The pipeline: backslash-newline splicing, lossless lexing with a trivia
channel, restricted macro preprocessing, deterministic shift-reduce parsing
with a recorded Shift/Reduce history and a scoped identifier environment,
comment-annotation commands addressed by navigation expressions, lowering to
a reduced core AST, and an executable state-exception back-end.  Exposed as a
library, the `ccheck` CLI, and a continuous-check stdio server.
"""

__version__ = "0.1.0"

from .source import Pos, Range, SourceFile, SpliceMap, splice  # noqa: F401
from .lexer import Token, Trivia, classify_annotation, tokenize  # noqa: F401
from .preproc import Directive, MacroTable, preprocess, scan_directives  # noqa: F401
from .reports import Diagnostic, Report, emit, fresh_serial  # noqa: F401
from .env import Binding, Env  # noqa: F401
from .parser import CParser, ParseResult, SRForest, get_parser, sr_events  # noqa: F401
from .annot import (  # noqa: F401
    Annotation,
    AnnotationCmd,
    Context,
    NavExpr,
    make_context,
    parse_annotation,
    register_command,
    resolve,
    schedule_and_run,
)
from .lower import CoreProgram, attach_specs, core_sexp, lower  # noqa: F401
from .pretty import pretty  # noqa: F401
from .clean import CleanProgram, CleanState, call, exec_stmt, translate  # noqa: F401
from .pipeline import PassOptions, PassResult, run_pass  # noqa: F401
