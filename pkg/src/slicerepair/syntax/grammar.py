"""Node-kind vocabulary for the JavaScript-subset trees.

Every token of the source becomes a leaf node, so the tree carries the full
token stream: keyword and punctuation leaves have a fixed lexeme derived from
their kind, while identifier/literal/operator leaves carry the lexeme in
``value``. Keyword and punctuation leaves are bookkeeping only and are
excluded from tree comparison and edit operations (see diffs.SEMANTIC
projection); the statement kinds themselves encode keyword distinctions
(VarDeclaration vs LetDeclaration, ForInStatement vs ForOfStatement, ...).
"""

# statements / structure
PROGRAM = "Program"
VAR_DECLARATION = "VarDeclaration"
LET_DECLARATION = "LetDeclaration"
CONST_DECLARATION = "ConstDeclaration"
DECLARATOR = "Declarator"
FUNCTION_DECLARATION = "FunctionDeclaration"
PARAM_LIST = "ParamList"
BLOCK = "Block"
RETURN_STATEMENT = "ReturnStatement"
EXPRESSION_STATEMENT = "ExpressionStatement"
IF_STATEMENT = "IfStatement"
FOR_STATEMENT = "ForStatement"
FOR_IN_STATEMENT = "ForInStatement"
FOR_OF_STATEMENT = "ForOfStatement"
WHILE_STATEMENT = "WhileStatement"
IMPORT_DECLARATION = "ImportDeclaration"
NAMED_IMPORTS = "NamedImports"
EXPORT_DEFAULT = "ExportDefaultDeclaration"
EMPTY_STATEMENT = "EmptyStatement"

# expressions
ASSIGNMENT_EXPRESSION = "AssignmentExpression"
BINARY_EXPRESSION = "BinaryExpression"
LOGICAL_EXPRESSION = "LogicalExpression"
UNARY_EXPRESSION = "UnaryExpression"
UPDATE_EXPRESSION = "UpdateExpression"
CALL_EXPRESSION = "CallExpression"
NEW_EXPRESSION = "NewExpression"
MEMBER_EXPRESSION = "MemberExpression"
COMPUTED_MEMBER_EXPRESSION = "ComputedMemberExpression"
OBJECT_LITERAL = "ObjectLiteral"
PROPERTY = "Property"
METHOD_PROPERTY = "MethodProperty"
SHORTHAND_PROPERTY = "ShorthandProperty"
SPREAD_ELEMENT = "SpreadElement"
ARRAY_LITERAL = "ArrayLiteral"
ARROW_FUNCTION = "ArrowFunction"
PAREN_EXPRESSION = "ParenExpression"

# value-bearing leaves
IDENTIFIER = "Identifier"
PROPERTY_NAME = "PropertyName"
NUMBER_LITERAL = "NumberLiteral"
STRING_LITERAL = "StringLiteral"
BOOLEAN_LITERAL = "BooleanLiteral"
OPERATOR = "Operator"
FOREIGN = "Foreign"

# fixed-lexeme leaves
THIS_EXPRESSION = "ThisExpression"
NULL_LITERAL = "NullLiteral"

KEYWORD_KINDS = {
    "KwVar": "var",
    "KwLet": "let",
    "KwConst": "const",
    "KwFunction": "function",
    "KwReturn": "return",
    "KwIf": "if",
    "KwElse": "else",
    "KwFor": "for",
    "KwWhile": "while",
    "KwIn": "in",
    "KwOf": "of",
    "KwNew": "new",
    "KwImport": "import",
    "KwExport": "export",
    "KwDefault": "default",
    "KwFrom": "from",
}

PUNCT_KINDS = {
    "PunctLParen": "(",
    "PunctRParen": ")",
    "PunctLBrace": "{",
    "PunctRBrace": "}",
    "PunctLBracket": "[",
    "PunctRBracket": "]",
    "PunctComma": ",",
    "PunctSemi": ";",
    "PunctColon": ":",
    "PunctDot": ".",
    "PunctArrow": "=>",
    "PunctEllipsis": "...",
}

PUNCT_BY_LEXEME = {v: k for k, v in PUNCT_KINDS.items()}

# lexeme derivable from the kind alone
FIXED_LEXEMES = dict(KEYWORD_KINDS)
FIXED_LEXEMES.update(PUNCT_KINDS)
FIXED_LEXEMES[THIS_EXPRESSION] = "this"
FIXED_LEXEMES[NULL_LITERAL] = "null"

# excluded from the semantic projection used by diffing
STRUCTURAL_LEAF_KINDS = set(KEYWORD_KINDS) | set(PUNCT_KINDS)

# leaves whose ``value`` field holds the lexeme
VALUE_KINDS = {
    IDENTIFIER,
    PROPERTY_NAME,
    NUMBER_LITERAL,
    STRING_LITERAL,
    BOOLEAN_LITERAL,
    OPERATOR,
    FOREIGN,
}

CONTROL_KINDS = {
    IF_STATEMENT,
    FOR_STATEMENT,
    FOR_IN_STATEMENT,
    FOR_OF_STATEMENT,
    WHILE_STATEMENT,
}

STATEMENT_KINDS = {
    VAR_DECLARATION,
    LET_DECLARATION,
    CONST_DECLARATION,
    FUNCTION_DECLARATION,
    RETURN_STATEMENT,
    EXPRESSION_STATEMENT,
    IF_STATEMENT,
    FOR_STATEMENT,
    FOR_IN_STATEMENT,
    FOR_OF_STATEMENT,
    WHILE_STATEMENT,
    IMPORT_DECLARATION,
    EXPORT_DEFAULT,
    EMPTY_STATEMENT,
    BLOCK,
}

DECLARATION_KEYWORDS = {"var", "let", "const"}

DECLARATION_KIND_BY_KEYWORD = {
    "var": VAR_DECLARATION,
    "let": LET_DECLARATION,
    "const": CONST_DECLARATION,
}

# methods treated as mutating their receiver during dependence analysis
MUTATOR_METHODS = {
    "push",
    "pop",
    "shift",
    "unshift",
    "splice",
    "sort",
    "reverse",
    "fill",
    "set",
    "add",
    "delete",
    "clear",
    "append",
}

ALL_KINDS = sorted(
    {
        PROGRAM,
        VAR_DECLARATION,
        LET_DECLARATION,
        CONST_DECLARATION,
        DECLARATOR,
        FUNCTION_DECLARATION,
        PARAM_LIST,
        BLOCK,
        RETURN_STATEMENT,
        EXPRESSION_STATEMENT,
        IF_STATEMENT,
        FOR_STATEMENT,
        FOR_IN_STATEMENT,
        FOR_OF_STATEMENT,
        WHILE_STATEMENT,
        IMPORT_DECLARATION,
        NAMED_IMPORTS,
        EXPORT_DEFAULT,
        EMPTY_STATEMENT,
        ASSIGNMENT_EXPRESSION,
        BINARY_EXPRESSION,
        LOGICAL_EXPRESSION,
        UNARY_EXPRESSION,
        UPDATE_EXPRESSION,
        CALL_EXPRESSION,
        NEW_EXPRESSION,
        MEMBER_EXPRESSION,
        COMPUTED_MEMBER_EXPRESSION,
        OBJECT_LITERAL,
        PROPERTY,
        METHOD_PROPERTY,
        SHORTHAND_PROPERTY,
        SPREAD_ELEMENT,
        ARRAY_LITERAL,
        ARROW_FUNCTION,
        PAREN_EXPRESSION,
        IDENTIFIER,
        PROPERTY_NAME,
        NUMBER_LITERAL,
        STRING_LITERAL,
        BOOLEAN_LITERAL,
        OPERATOR,
        FOREIGN,
        THIS_EXPRESSION,
        NULL_LITERAL,
    }
    | STRUCTURAL_LEAF_KINDS
)
