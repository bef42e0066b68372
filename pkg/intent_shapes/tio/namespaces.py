"""Namespaces of the fixture intent ontology and its shape library."""

from ..rdf.terms import RDFS, Namespace

TIO_BASE = "https://tio.example.org/v3.6.0/"

# module name -> conventional prefix
MODULE_PREFIXES = {
    "IntentCommonModel": "icm",
    "IntentManagementOntology": "imo",
    "QuantityOntology": "quan",
    "FunctionOntology": "fun",
    "PreferenceOfHandlingOutcomes": "pho",
    "IntentValidityOntology": "iv",
    "IntentSpecification": "ispec",
    "IntentGuaranteeOntology": "ig",
    "Utility": "util",
    "MathFunctions": "mf",
    "ProposalBestIntent": "pbi",
    "IntentProbing": "ip",
    "LogicalOperators": "log",
    "MetricsAndObservations": "met",
    "SetOperators": "set",
}
MODULES = tuple(MODULE_PREFIXES)


def module_namespace(module: str) -> str:
    return f"{TIO_BASE}{module}/"


ICM = Namespace(module_namespace("IntentCommonModel"))
LOG = Namespace(module_namespace("LogicalOperators"))
QUAN = Namespace(module_namespace("QuantityOntology"))
FUN = Namespace(module_namespace("FunctionOntology"))
MET = Namespace(module_namespace("MetricsAndObservations"))
SET = Namespace(module_namespace("SetOperators"))
IV = Namespace(module_namespace("IntentValidityOntology"))

# shape library
TIO = Namespace("https://tio.example.org/shacl/")

POLYMORPHIC_RESULT = RDFS.Resource
QUANTITY_DATATYPE = QUAN.quantity
BOOLEAN_OPERATORS = (LOG.allOf, LOG.anyOf)
QUANTITY_COMPARISONS = (QUAN.atLeast, QUAN.atMost, QUAN.exactly, QUAN.between)

# constraint identifiers shared by both shape tiers
ARITY_CONSTRAINT = TIO.FunctionUsageArityConstraint
ARGUMENT_TYPE_CONSTRAINT = TIO.FunctionUsageArgumentTypeObjectConstraint
BOOLEAN_OPERAND_CONSTRAINT = TIO.LogicalOperatorArgumentConstraint
INTENT_OPERAND_CONSTRAINT = TIO.IntentOperandConstraint
EXPECTATION_OPERAND_CONSTRAINT = TIO.ExpectationOperandConstraint
ACTIONABLE_CONSTRAINT = TIO.ActionableBooleanEvaluableConstraint
VOCABULARY_CONSTRAINT = TIO.VocabularyUsageConstraint
UNIT_AGREEMENT_CONSTRAINT = TIO.QuantityUnitAgreementConstraint

FLAGSHIP_CONSTRAINTS = (
    ARITY_CONSTRAINT,
    ARGUMENT_TYPE_CONSTRAINT,
    BOOLEAN_OPERAND_CONSTRAINT,
    INTENT_OPERAND_CONSTRAINT,
    EXPECTATION_OPERAND_CONSTRAINT,
    ACTIONABLE_CONSTRAINT,
    VOCABULARY_CONSTRAINT,
    UNIT_AGREEMENT_CONSTRAINT,
)
