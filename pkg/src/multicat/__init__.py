"""multicat: one schema over relational, XML, graph, and key-value data,
queried with fold-based QUERY/FROM/TO blocks and rendered in any model."""

from .category import (LawReport, Morphism, SchemaCategory, SchemaObject, Violation,
                       check_category_laws, compose, compose_path, load_schema)
from .engine import (FoldPlan, Stage, compile_query, eval_expr, execute, plan_to_json,
                     reference_interpret)
from .graph import (Connect, Empty, GraphSemantics, GraphTerm, Overlay, Vertex, foldg,
                    graph_eq, induced_subgraph, parse_term, semantics, term_text, to_dot)
from .lang import parse, pretty, source_types, typecheck
from .render import (GraphView, Table, render_all, render_graph, render_graph_term,
                     render_relational, render_xml, table_to_csv)
from .store import (Collection, InstanceStore, MorphismEvaluator, apply_morphism,
                    check_functor_laws, collection_elements, load_dataset, load_registry)
from .values import EntityV, GraphV, ListV, PrimV, TupleV, Value, values_equal

__version__ = "0.1.0"

__all__ = [
    "LawReport", "Morphism", "SchemaCategory", "SchemaObject", "Violation",
    "check_category_laws", "compose", "compose_path", "load_schema",
    "FoldPlan", "Stage", "compile_query", "eval_expr", "execute",
    "plan_to_json", "reference_interpret",
    "Connect", "Empty", "GraphSemantics", "GraphTerm", "Overlay", "Vertex",
    "foldg", "graph_eq", "induced_subgraph", "parse_term", "semantics",
    "term_text", "to_dot",
    "parse", "pretty", "source_types", "typecheck",
    "GraphView", "Table", "render_all", "render_graph", "render_graph_term",
    "render_relational", "render_xml", "table_to_csv",
    "Collection", "InstanceStore", "MorphismEvaluator", "apply_morphism",
    "check_functor_laws", "collection_elements", "load_dataset", "load_registry",
    "EntityV", "GraphV", "ListV", "PrimV", "TupleV", "Value", "values_equal",
]
