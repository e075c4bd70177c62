"""Exception types. Each carries a stable machine-readable ``code``."""


class ProjdynError(Exception):
    code = "error"
    exit_code = 2


class InputError(ProjdynError):
    """Invalid input: the caller handed us something outside an operation's domain."""
    code = "input"
    exit_code = 2


class NumericError(ProjdynError):
    """A numeric procedure could not resolve the question asked of it."""
    code = "numeric"
    exit_code = 3


def _make(name, base, doc):
    cls = type(name, (base,), {"__doc__": doc, "code": name})
    return cls


IdenticalPoints = _make("IdenticalPoints", InputError, "Two equal points do not span a line.")
SameLine = _make("SameLine", InputError, "Equal lines have no unique intersection.")
ZeroMatrix = _make("ZeroMatrix", InputError, "The zero matrix is not a quasi-projective map.")
ZeroPoint = _make("ZeroPoint", InputError, "The zero vector is not a projective point.")
SingularMatrix = _make("SingularMatrix", InputError, "A projective map needs a nonzero determinant.")
DegenerateConfiguration = _make("DegenerateConfiguration", InputError, "Points are not in general position.")
NotGeneralPosition = _make("NotGeneralPosition", InputError, "Lines are not in general position.")
SignatureError = _make("SignatureError", InputError, "Hermitian form has the wrong signature.")
MixedSurd = _make("MixedSurd", InputError, "Arithmetic mixing two different square roots.")
UnsupportedExactCubic = _make("UnsupportedExactCubic", NumericError, "Eigenvalues leave the declared exact field.")
IdentityElement = _make("IdentityElement", InputError, "Scalar matrices have no class in the taxonomy.")
NeedHint = _make("NeedHint", NumericError, "Angle rationality cannot be decided from floats.")
UnsupportedClass = _make("UnsupportedClass", InputError, "No cyclic limit set formula for this class.")
RegionsOverlap = _make("RegionsOverlap", InputError, "Ping-pong regions intersect.")
NoLimit = _make("NoLimit", NumericError, "Normalized powers do not converge.")
Diverged = _make("Diverged", NumericError, "No stabilization within the iteration budget.")
NotTriangular = _make("NotTriangular", InputError, "Matrix is not upper triangular.")
UnresolvedFlags = _make("UnresolvedFlags", NumericError, "Tri-state flags could not be decided.")
NoLoxodromic = _make("NoLoxodromic", InputError, "Group has no loxodromic element.")
UnresolvedDependence = _make("UnresolvedDependence", NumericError, "Multiplicative dependence undecided.")
NoDivergentSequence = _make("NoDivergentSequence", InputError, "Powers stay bounded.")
EmptyInput = _make("EmptyInput", InputError, "Empty input list.")
BadSubset = _make("BadSubset", InputError, "Hull subset outside the block range.")
NotInP = _make("NotInP", InputError, "Parameter outside the arrangement parameter space.")
PointOnH = _make("PointOnH", InputError, "Point lies on a special line.")
ForbiddenEta = _make("ForbiddenEta", InputError, "Slice parameter in the forbidden set.")
OutsideDisk = _make("OutsideDisk", InputError, "Point outside the open unit disk.")
TooFewRows = _make("TooFewRows", InputError, "Not enough orbit rows.")
TooFewSamples = _make("TooFewSamples", InputError, "Not enough samples.")
SchemaError = _make("SchemaError", InputError, "JSON document does not match the schema.")
