"""The embedded C11 subset grammar: productions, AST-building actions, monadic tags.

The grammar follows the classic LALR(1) C layout (expressions as a precedence
ladder, declarators shared between concrete and abstract forms) with typedef
disambiguation delegated to the token classifier.  Rules whose actions touch
the identifier environment (scope open/close, declarator naming, typedef and
tag introduction) carry the `monadic` tag; they are the ancestor set targeted
by `&` navigation.

Out of grammar by design: `_Generic`, `_Atomic`, `_Alignas`, `_Alignof`,
K&R parameter declarations, and GNU statement expressions.
"""

from __future__ import annotations

from . import c_ast as A

IDENT = "IDENT"
TYPEDEF_NAME = "TYPEDEF_NAME"
INT_LIT = "INT_LIT"
FLOAT_LIT = "FLOAT_LIT"
CHAR_LIT = "CHAR_LIT"
STR_LIT = "STR_LIT"

START_SYMBOL = "start"


# -- action helpers -----------------------------------------------------------
# Signature: fn(run, vals) -> value.  `run` provides mk() for node creation
# (position/id assignment) and diag() for structured diagnostics.

def _tok_text(run, v):
    return v[0].text


def _second(run, v):
    return v[1]


def _list1(run, v):
    return [v[0]]


def _list_append(run, v):
    v[0].append(v[-1])
    return v[0]


def _ident(run, v):
    return run.mk(A.Ident, v[0].text)


def _intlit(run, v):
    return run.mk(A.IntLit, v[0].text)


def _floatlit(run, v):
    return run.mk(A.FloatLit, v[0].text)


def _charlit(run, v):
    return run.mk(A.CharLit, v[0].text)


def _str1(run, v):
    return run.mk(A.StrLit, (v[0].text,))


def _str_cons(run, v):
    return run.mk(A.StrLit, v[0].parts + (v[1].text,))


def _index(run, v):
    return run.mk(A.Index, v[0], v[2])


def _call0(run, v):
    return run.mk(A.Call, v[0], ())


def _call(run, v):
    return run.mk(A.Call, v[0], tuple(v[2]))


def _member(run, v):
    return run.mk(A.Member, v[0], False, v[2].text)


def _arrow(run, v):
    return run.mk(A.Member, v[0], True, v[2].text)


def _postop(run, v):
    return run.mk(A.Unary, v[1].name, v[0], True)


def _preop(run, v):
    return run.mk(A.Unary, v[0].name, v[1], False)


def _unop(run, v):
    return run.mk(A.Unary, v[0].name, v[1], False)


def _sizeof_expr(run, v):
    return run.mk(A.SizeofExpr, v[1])


def _sizeof_type(run, v):
    return run.mk(A.SizeofType, v[2])


def _cast(run, v):
    return run.mk(A.Cast, v[1], v[3])


def _binary(run, v):
    return run.mk(A.Binary, v[1].name, v[0], v[2])


def _comma(run, v):
    return run.mk(A.Binary, ",", v[0], v[2])


def _cond(run, v):
    return run.mk(A.Cond, v[0], v[2], v[4])


def _assign(run, v):
    return run.mk(A.Assign, v[1], v[0], v[2])


def _assign_op(run, v):
    return v[0].name


def _compound_lit(run, v):
    init = run.mk(A.InitList, tuple(v[4]))
    return run.mk(A.CompoundLit, v[1], init)


def _ds_storage1(run, v):
    return run.mk(A.DeclSpecs, (v[0],), (), (), ())


def _ds_storage(run, v):
    d = v[1]
    return run.mk(A.DeclSpecs, (v[0],) + d.storage, d.quals, d.funcspecs, d.types)


def _ds_type1(run, v):
    return run.mk(A.DeclSpecs, (), (), (), (v[0],))


def _ds_type(run, v):
    d = v[1]
    return run.mk(A.DeclSpecs, d.storage, d.quals, d.funcspecs, (v[0],) + d.types)


def _ds_qual1(run, v):
    return run.mk(A.DeclSpecs, (), (v[0],), (), ())


def _ds_qual(run, v):
    d = v[1]
    return run.mk(A.DeclSpecs, d.storage, (v[0],) + d.quals, d.funcspecs, d.types)


def _ds_func1(run, v):
    return run.mk(A.DeclSpecs, (), (), (v[0],), ())


def _ds_func(run, v):
    d = v[1]
    return run.mk(A.DeclSpecs, d.storage, d.quals, (v[0],) + d.funcspecs, d.types)


def _typedef_use(run, v):
    return run.mk(A.TypedefUse, v[0].text)


def _sus_anon(run, v):
    return run.mk(A.StructSpec, v[0], None, tuple(v[2]))


def _sus_tagged(run, v):
    return run.mk(A.StructSpec, v[0], v[1].text, tuple(v[3]))


def _sus_ref(run, v):
    return run.mk(A.StructSpec, v[0], v[1].text, None)


def _struct_decl0(run, v):
    return run.mk(A.StructDecl, v[0], ())


def _struct_decl(run, v):
    return run.mk(A.StructDecl, v[0], tuple(v[1]))


def _check_width(run, v, w):
    if w is not None and not isinstance(w, A.IntLit):
        run.diag("error", "bitfield width must be an integer constant", w, "bitfield-width")


def _sdtor(run, v):
    return run.mk(A.StructDeclarator, v[0], None)


def _sdtor_anon_width(run, v):
    _check_width(run, v, v[1])
    return run.mk(A.StructDeclarator, None, v[1])


def _sdtor_width(run, v):
    _check_width(run, v, v[2])
    return run.mk(A.StructDeclarator, v[0], v[2])


def _enum_anon(run, v):
    return run.mk(A.EnumSpec, None, tuple(v[2]))


def _enum_tagged(run, v):
    return run.mk(A.EnumSpec, v[1].text, tuple(v[3]))


def _enum_ref(run, v):
    return run.mk(A.EnumSpec, v[1].text, None)


def _enumerator(run, v):
    return run.mk(A.Enumerator, v[0].text, None)


def _enumerator_val(run, v):
    return run.mk(A.Enumerator, v[0].text, v[2])


def _declaration0(run, v):
    return run.mk(A.Declaration, v[0], ())


def _declaration(run, v):
    return run.mk(A.Declaration, v[0], tuple(v[1]))


def _initdecl(run, v):
    return run.mk(A.InitDeclarator, v[0], None)


def _initdecl_init(run, v):
    return run.mk(A.InitDeclarator, v[0], v[2])


def _dname(run, v):
    node = run.mk(A.DName, v[0].text)
    node.tok = v[0]  # definition positions come from the token itself
    return node


def _darray(run, v):
    return run.mk(A.DArray, v[0], None)


def _darray_sz(run, v):
    return run.mk(A.DArray, v[0], v[2])


def _dfunc0(run, v):
    return run.mk(A.DFunc, v[0], (), False)


def _dfunc(run, v):
    params, vararg = v[2]
    return run.mk(A.DFunc, v[0], params, vararg)


def _wrap_pointers(run, pointers, inner):
    for quals in pointers:
        inner = run.mk(A.DPointer, quals, inner)
    return inner


def _declarator_ptr(run, v):
    return _wrap_pointers(run, v[0], v[1])


def _ptr1(run, v):
    return ((),)


def _ptr_q(run, v):
    return (tuple(v[1]),)


def _ptr_p(run, v):
    return ((),) + v[1]


def _ptr_qp(run, v):
    return (tuple(v[1]),) + v[2]


def _ptl(run, v):
    return (tuple(v[0]), False)


def _ptl_va(run, v):
    return (tuple(v[0]), True)


def _param(run, v):
    return run.mk(A.ParamDecl, v[0], v[1])


def _param_anon(run, v):
    return run.mk(A.ParamDecl, v[0], None)


def _type_name(run, v):
    return run.mk(A.TypeName, v[0], None)


def _type_name_ad(run, v):
    return run.mk(A.TypeName, v[0], v[1])


def _ad_ptr(run, v):
    return _wrap_pointers(run, v[0], run.mk(A.DAbstract))


def _ad_ptr_direct(run, v):
    return _wrap_pointers(run, v[0], v[1])


def _dad_arr0(run, v):
    return run.mk(A.DArray, run.mk(A.DAbstract), None)


def _dad_arr(run, v):
    return run.mk(A.DArray, run.mk(A.DAbstract), v[1])


def _dad_arr0_of(run, v):
    return run.mk(A.DArray, v[0], None)


def _dad_arr_of(run, v):
    return run.mk(A.DArray, v[0], v[2])


def _dad_fn0(run, v):
    return run.mk(A.DFunc, run.mk(A.DAbstract), (), False)


def _dad_fn(run, v):
    params, vararg = v[1]
    return run.mk(A.DFunc, run.mk(A.DAbstract), params, vararg)


def _dad_fn0_of(run, v):
    return run.mk(A.DFunc, v[0], (), False)


def _dad_fn_of(run, v):
    params, vararg = v[2]
    return run.mk(A.DFunc, v[0], params, vararg)


def _initlist(run, v):
    return run.mk(A.InitList, tuple(v[1]))


def _ii(run, v):
    return [run.mk(A.InitItem, None, v[0])]


def _ii_des(run, v):
    return [run.mk(A.InitItem, tuple(v[0]), v[1])]


def _ii_cons(run, v):
    v[0].append(run.mk(A.InitItem, None, v[2]))
    return v[0]


def _ii_des_cons(run, v):
    v[0].append(run.mk(A.InitItem, tuple(v[2]), v[3]))
    return v[0]


def _design_index(run, v):
    return run.mk(A.DesignIndex, v[1])


def _design_field(run, v):
    return run.mk(A.DesignField, v[1].text)


def _static_assert(run, v):
    return run.mk(A.StaticAssert, v[2], v[4])


def _label(run, v):
    return run.mk(A.Label, v[0].text, v[2])


def _case(run, v):
    return run.mk(A.Case, v[1], v[3])


def _default(run, v):
    return run.mk(A.Default, v[2])


def _compound0(run, v):
    return run.mk(A.Compound, ())


def _compound(run, v):
    return run.mk(A.Compound, tuple(v[1]))


def _exprstmt_empty(run, v):
    return run.mk(A.ExprStmt, None)


def _exprstmt(run, v):
    return run.mk(A.ExprStmt, v[0])


def _if(run, v):
    return run.mk(A.If, v[2], v[4], None)


def _ifelse(run, v):
    return run.mk(A.If, v[2], v[4], v[6])


def _switch(run, v):
    return run.mk(A.Switch, v[2], v[4])


def _while(run, v):
    return run.mk(A.While, v[2], v[4])


def _do(run, v):
    return run.mk(A.DoWhile, v[1], v[4])


def _for(run, v):
    return run.mk(A.For, v[2], v[3], None, v[5])


def _for_step(run, v):
    return run.mk(A.For, v[2], v[3], v[4], v[6])


def _goto(run, v):
    return run.mk(A.Goto, v[1].text)


def _continue(run, v):
    return run.mk(A.Continue)


def _break(run, v):
    return run.mk(A.Break)


def _return(run, v):
    return run.mk(A.Return, None)


def _return_e(run, v):
    return run.mk(A.Return, v[1])


def _funhead(run, v):
    return (v[0], v[1])


def _fundef(run, v):
    specs, decl = v[0]
    return run.mk(A.FunctionDef, specs, decl, v[1])


def _external(run, v):
    run.externals.append(v[0])
    return v[0]


def _tu(run, v):
    return run.mk(A.TranslationUnit, tuple(run.externals))


# -- the grammar ---------------------------------------------------------------
# (lhs, rhs, action, monadic); action None = pass through first child (or None).

GRAMMAR: list[tuple[str, str, object, bool]] = [
    ("start", "", _tu, False),
    ("start", "translation_unit", _tu, False),
    ("translation_unit", "external_declaration", None, False),
    ("translation_unit", "translation_unit external_declaration", None, False),
    ("external_declaration", "function_definition", _external, False),
    ("external_declaration", "declaration", _external, False),
    ("function_definition", "function_head compound_statement", _fundef, False),
    ("function_head", "declaration_specifiers declarator", _funhead, True),

    # declarations
    ("declaration", "declaration_specifiers ;", _declaration0, True),
    ("declaration", "declaration_specifiers init_declarator_list ;", _declaration, True),
    ("declaration", "static_assert_declaration", None, False),
    ("declaration_specifiers", "storage_class_specifier", _ds_storage1, False),
    ("declaration_specifiers", "storage_class_specifier declaration_specifiers", _ds_storage, False),
    ("declaration_specifiers", "type_specifier", _ds_type1, False),
    ("declaration_specifiers", "type_specifier declaration_specifiers", _ds_type, False),
    ("declaration_specifiers", "type_qualifier", _ds_qual1, False),
    ("declaration_specifiers", "type_qualifier declaration_specifiers", _ds_qual, False),
    ("declaration_specifiers", "function_specifier", _ds_func1, False),
    ("declaration_specifiers", "function_specifier declaration_specifiers", _ds_func, False),
    ("init_declarator_list", "init_declarator", _list1, False),
    ("init_declarator_list", "init_declarator_list , init_declarator", _list_append, False),
    ("init_declarator", "declarator", _initdecl, False),
    ("init_declarator", "declarator = initializer", _initdecl_init, False),
    ("storage_class_specifier", "typedef", _tok_text, False),
    ("storage_class_specifier", "extern", _tok_text, False),
    ("storage_class_specifier", "static", _tok_text, False),
    ("storage_class_specifier", "auto", _tok_text, False),
    ("storage_class_specifier", "register", _tok_text, False),
    ("storage_class_specifier", "_Thread_local", _tok_text, False),
    ("type_specifier", "void", _tok_text, False),
    ("type_specifier", "char", _tok_text, False),
    ("type_specifier", "short", _tok_text, False),
    ("type_specifier", "int", _tok_text, False),
    ("type_specifier", "long", _tok_text, False),
    ("type_specifier", "float", _tok_text, False),
    ("type_specifier", "double", _tok_text, False),
    ("type_specifier", "signed", _tok_text, False),
    ("type_specifier", "unsigned", _tok_text, False),
    ("type_specifier", "_Bool", _tok_text, False),
    ("type_specifier", "_Complex", _tok_text, False),
    ("type_specifier", "_Imaginary", _tok_text, False),
    ("type_specifier", "struct_or_union_specifier", None, False),
    ("type_specifier", "enum_specifier", None, False),
    ("type_specifier", "TYPEDEF_NAME", _typedef_use, False),
    ("function_specifier", "inline", _tok_text, False),
    ("function_specifier", "_Noreturn", _tok_text, False),
    ("type_qualifier", "const", _tok_text, False),
    ("type_qualifier", "restrict", _tok_text, False),
    ("type_qualifier", "volatile", _tok_text, False),
    ("struct_or_union_specifier", "struct_or_union { struct_declaration_list }", _sus_anon, False),
    ("struct_or_union_specifier", "struct_or_union any_identifier { struct_declaration_list }", _sus_tagged, True),
    ("struct_or_union_specifier", "struct_or_union any_identifier", _sus_ref, True),
    ("struct_or_union", "struct", _tok_text, False),
    ("struct_or_union", "union", _tok_text, False),
    ("struct_declaration_list", "struct_declaration", _list1, False),
    ("struct_declaration_list", "struct_declaration_list struct_declaration", _list_append, False),
    ("struct_declaration", "specifier_qualifier_list ;", _struct_decl0, False),
    ("struct_declaration", "specifier_qualifier_list struct_declarator_list ;", _struct_decl, False),
    ("struct_declaration", "static_assert_declaration", None, False),
    ("specifier_qualifier_list", "type_specifier specifier_qualifier_list", _ds_type, False),
    ("specifier_qualifier_list", "type_specifier", _ds_type1, False),
    ("specifier_qualifier_list", "type_qualifier specifier_qualifier_list", _ds_qual, False),
    ("specifier_qualifier_list", "type_qualifier", _ds_qual1, False),
    ("struct_declarator_list", "struct_declarator", _list1, False),
    ("struct_declarator_list", "struct_declarator_list , struct_declarator", _list_append, False),
    ("struct_declarator", "declarator", _sdtor, False),
    ("struct_declarator", ": constant_expression", _sdtor_anon_width, False),
    ("struct_declarator", "declarator : constant_expression", _sdtor_width, False),
    ("enum_specifier", "enum { enumerator_list }", _enum_anon, False),
    ("enum_specifier", "enum { enumerator_list , }", _enum_anon, False),
    ("enum_specifier", "enum any_identifier { enumerator_list }", _enum_tagged, True),
    ("enum_specifier", "enum any_identifier { enumerator_list , }", _enum_tagged, True),
    ("enum_specifier", "enum any_identifier", _enum_ref, True),
    ("enumerator_list", "enumerator", _list1, False),
    ("enumerator_list", "enumerator_list , enumerator", _list_append, False),
    ("enumerator", "IDENT", _enumerator, True),
    ("enumerator", "IDENT = constant_expression", _enumerator_val, True),
    ("any_identifier", "IDENT", None, False),
    ("any_identifier", "TYPEDEF_NAME", None, False),

    # declarators
    ("declarator", "pointer direct_declarator", _declarator_ptr, False),
    ("declarator", "direct_declarator", None, False),
    ("direct_declarator", "IDENT", _dname, False),
    ("direct_declarator", "( declarator )", _second, False),
    ("direct_declarator", "direct_declarator [ ]", _darray, False),
    ("direct_declarator", "direct_declarator [ assignment_expression ]", _darray_sz, False),
    ("direct_declarator", "direct_declarator ( parameter_type_list )", _dfunc, False),
    ("direct_declarator", "direct_declarator ( )", _dfunc0, False),
    ("pointer", "*", _ptr1, False),
    ("pointer", "* type_qualifier_list", _ptr_q, False),
    ("pointer", "* pointer", _ptr_p, False),
    ("pointer", "* type_qualifier_list pointer", _ptr_qp, False),
    ("type_qualifier_list", "type_qualifier", _list1, False),
    ("type_qualifier_list", "type_qualifier_list type_qualifier", _list_append, False),
    ("parameter_type_list", "parameter_list", _ptl, False),
    ("parameter_type_list", "parameter_list , ...", _ptl_va, False),
    ("parameter_list", "parameter_declaration", _list1, False),
    ("parameter_list", "parameter_list , parameter_declaration", _list_append, False),
    ("parameter_declaration", "declaration_specifiers declarator", _param, False),
    ("parameter_declaration", "declaration_specifiers abstract_declarator", _param, False),
    ("parameter_declaration", "declaration_specifiers", _param_anon, False),
    ("type_name", "specifier_qualifier_list", _type_name, False),
    ("type_name", "specifier_qualifier_list abstract_declarator", _type_name_ad, False),
    ("abstract_declarator", "pointer", _ad_ptr, False),
    ("abstract_declarator", "direct_abstract_declarator", None, False),
    ("abstract_declarator", "pointer direct_abstract_declarator", _ad_ptr_direct, False),
    ("direct_abstract_declarator", "( abstract_declarator )", _second, False),
    ("direct_abstract_declarator", "[ ]", _dad_arr0, False),
    ("direct_abstract_declarator", "[ assignment_expression ]", _dad_arr, False),
    ("direct_abstract_declarator", "direct_abstract_declarator [ ]", _dad_arr0_of, False),
    ("direct_abstract_declarator", "direct_abstract_declarator [ assignment_expression ]", _dad_arr_of, False),
    ("direct_abstract_declarator", "( )", _dad_fn0, False),
    ("direct_abstract_declarator", "( parameter_type_list )", _dad_fn, False),
    ("direct_abstract_declarator", "direct_abstract_declarator ( )", _dad_fn0_of, False),
    ("direct_abstract_declarator", "direct_abstract_declarator ( parameter_type_list )", _dad_fn_of, False),
    ("initializer", "assignment_expression", None, False),
    ("initializer", "{ initializer_list }", _initlist, False),
    ("initializer", "{ initializer_list , }", _initlist, False),
    ("initializer_list", "initializer", _ii, False),
    ("initializer_list", "designation initializer", _ii_des, False),
    ("initializer_list", "initializer_list , initializer", _ii_cons, False),
    ("initializer_list", "initializer_list , designation initializer", _ii_des_cons, False),
    ("designation", "designator_list =", lambda run, v: v[0], False),
    ("designator_list", "designator", _list1, False),
    ("designator_list", "designator_list designator", _list_append, False),
    ("designator", "[ constant_expression ]", _design_index, False),
    ("designator", ". any_identifier", _design_field, False),
    ("static_assert_declaration", "_Static_assert ( constant_expression , string_literal ) ;", _static_assert, False),
    ("string_literal", "STR_LIT", _str1, False),
    ("string_literal", "string_literal STR_LIT", _str_cons, False),

    # expressions
    ("primary_expression", "IDENT", _ident, False),
    ("primary_expression", "INT_LIT", _intlit, False),
    ("primary_expression", "FLOAT_LIT", _floatlit, False),
    ("primary_expression", "CHAR_LIT", _charlit, False),
    ("primary_expression", "string_literal", None, False),
    ("primary_expression", "( expression )", _second, False),
    ("postfix_expression", "primary_expression", None, False),
    ("postfix_expression", "postfix_expression [ expression ]", _index, False),
    ("postfix_expression", "postfix_expression ( )", _call0, False),
    ("postfix_expression", "postfix_expression ( argument_expression_list )", _call, False),
    ("postfix_expression", "postfix_expression . any_identifier", _member, False),
    ("postfix_expression", "postfix_expression -> any_identifier", _arrow, False),
    ("postfix_expression", "postfix_expression ++", _postop, False),
    ("postfix_expression", "postfix_expression --", _postop, False),
    ("postfix_expression", "( type_name ) { initializer_list }", _compound_lit, False),
    ("postfix_expression", "( type_name ) { initializer_list , }", _compound_lit, False),
    ("argument_expression_list", "assignment_expression", _list1, False),
    ("argument_expression_list", "argument_expression_list , assignment_expression", _list_append, False),
    ("unary_expression", "postfix_expression", None, False),
    ("unary_expression", "++ unary_expression", _preop, False),
    ("unary_expression", "-- unary_expression", _preop, False),
    ("unary_expression", "unary_operator cast_expression", _unop, False),
    ("unary_expression", "sizeof unary_expression", _sizeof_expr, False),
    ("unary_expression", "sizeof ( type_name )", _sizeof_type, False),
    ("unary_operator", "&", None, False),
    ("unary_operator", "*", None, False),
    ("unary_operator", "+", None, False),
    ("unary_operator", "-", None, False),
    ("unary_operator", "~", None, False),
    ("unary_operator", "!", None, False),
    ("cast_expression", "unary_expression", None, False),
    ("cast_expression", "( type_name ) cast_expression", _cast, False),
    ("multiplicative_expression", "cast_expression", None, False),
    ("multiplicative_expression", "multiplicative_expression * cast_expression", _binary, False),
    ("multiplicative_expression", "multiplicative_expression / cast_expression", _binary, False),
    ("multiplicative_expression", "multiplicative_expression % cast_expression", _binary, False),
    ("additive_expression", "multiplicative_expression", None, False),
    ("additive_expression", "additive_expression + multiplicative_expression", _binary, False),
    ("additive_expression", "additive_expression - multiplicative_expression", _binary, False),
    ("shift_expression", "additive_expression", None, False),
    ("shift_expression", "shift_expression << additive_expression", _binary, False),
    ("shift_expression", "shift_expression >> additive_expression", _binary, False),
    ("relational_expression", "shift_expression", None, False),
    ("relational_expression", "relational_expression < shift_expression", _binary, False),
    ("relational_expression", "relational_expression > shift_expression", _binary, False),
    ("relational_expression", "relational_expression <= shift_expression", _binary, False),
    ("relational_expression", "relational_expression >= shift_expression", _binary, False),
    ("equality_expression", "relational_expression", None, False),
    ("equality_expression", "equality_expression == relational_expression", _binary, False),
    ("equality_expression", "equality_expression != relational_expression", _binary, False),
    ("and_expression", "equality_expression", None, False),
    ("and_expression", "and_expression & equality_expression", _binary, False),
    ("exclusive_or_expression", "and_expression", None, False),
    ("exclusive_or_expression", "exclusive_or_expression ^ and_expression", _binary, False),
    ("inclusive_or_expression", "exclusive_or_expression", None, False),
    ("inclusive_or_expression", "inclusive_or_expression | exclusive_or_expression", _binary, False),
    ("logical_and_expression", "inclusive_or_expression", None, False),
    ("logical_and_expression", "logical_and_expression && inclusive_or_expression", _binary, False),
    ("logical_or_expression", "logical_and_expression", None, False),
    ("logical_or_expression", "logical_or_expression || logical_and_expression", _binary, False),
    ("conditional_expression", "logical_or_expression", None, False),
    ("conditional_expression", "logical_or_expression ? expression : conditional_expression", _cond, False),
    ("assignment_expression", "conditional_expression", None, False),
    ("assignment_expression", "unary_expression assignment_operator assignment_expression", _assign, False),
    ("assignment_operator", "=", _assign_op, False),
    ("assignment_operator", "*=", _assign_op, False),
    ("assignment_operator", "/=", _assign_op, False),
    ("assignment_operator", "%=", _assign_op, False),
    ("assignment_operator", "+=", _assign_op, False),
    ("assignment_operator", "-=", _assign_op, False),
    ("assignment_operator", "<<=", _assign_op, False),
    ("assignment_operator", ">>=", _assign_op, False),
    ("assignment_operator", "&=", _assign_op, False),
    ("assignment_operator", "^=", _assign_op, False),
    ("assignment_operator", "|=", _assign_op, False),
    ("expression", "assignment_expression", None, False),
    ("expression", "expression , assignment_expression", _comma, False),
    ("constant_expression", "conditional_expression", None, False),

    # statements
    ("statement", "labeled_statement", None, False),
    ("statement", "compound_statement", None, False),
    ("statement", "expression_statement", None, False),
    ("statement", "selection_statement", None, False),
    ("statement", "iteration_statement", None, False),
    ("statement", "jump_statement", None, False),
    ("labeled_statement", "IDENT : statement", _label, True),
    ("labeled_statement", "case constant_expression : statement", _case, False),
    ("labeled_statement", "default : statement", _default, False),
    ("compound_statement", "block_open block_close", _compound0, False),
    ("compound_statement", "block_open block_item_list block_close", _compound, False),
    ("block_open", "{", None, True),
    ("block_close", "}", None, True),
    ("block_item_list", "block_item", _list1, False),
    ("block_item_list", "block_item_list block_item", _list_append, False),
    ("block_item", "declaration", None, False),
    ("block_item", "statement", None, False),
    ("expression_statement", ";", _exprstmt_empty, False),
    ("expression_statement", "expression ;", _exprstmt, False),
    ("selection_statement", "if ( expression ) statement", _if, False),
    ("selection_statement", "if ( expression ) statement else statement", _ifelse, False),
    ("selection_statement", "switch ( expression ) statement", _switch, False),
    ("iteration_statement", "while ( expression ) statement", _while, False),
    ("iteration_statement", "do statement while ( expression ) ;", _do, False),
    ("iteration_statement", "for_statement", None, False),
    ("for_statement", "for_open ( for_init expression_statement ) statement", _for, True),
    ("for_statement", "for_open ( for_init expression_statement expression ) statement", _for_step, True),
    ("for_open", "for", None, True),
    ("for_init", "expression_statement", None, False),
    ("for_init", "declaration", None, False),
    ("jump_statement", "goto any_identifier ;", _goto, False),
    ("jump_statement", "continue ;", _continue, False),
    ("jump_statement", "break ;", _break, False),
    ("jump_statement", "return ;", _return, False),
    ("jump_statement", "return expression ;", _return_e, False),
]


def productions() -> list[tuple[str, tuple[str, ...]]]:
    return [(lhs, tuple(rhs.split()) if rhs else ()) for lhs, rhs, _, _ in GRAMMAR]
