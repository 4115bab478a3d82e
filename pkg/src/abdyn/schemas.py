"""JSON schemas for the CLI wire formats.

Integers travel as decimal strings on output (arbitrary precision); plain
JSON integers are also accepted on input.  Matrices are row-major arrays of
arrays, polynomials are ascending coefficient arrays, complex numbers are
[re, im] pairs.  The repository's schemas/ directory contains these same
schemas as JSON files (kept in sync by a test).
"""

INT_LIKE = {"anyOf": [{"type": "integer"},
                      {"type": "string", "pattern": "^-?[0-9]+$"}]}

MATRIX_SCHEMA = {
    "$id": "abdyn/matrix",
    "title": "Integer matrix (row-major)",
    "type": "array",
    "items": {"type": "array", "items": INT_LIKE, "minItems": 1},
    "minItems": 1,
}

POLYNOMIAL_SCHEMA = {
    "$id": "abdyn/polynomial",
    "title": "Integer polynomial, coefficients ascending by degree",
    "type": "array",
    "items": INT_LIKE,
}

SEMIABELIAN_AUT_SCHEMA = {
    "$id": "abdyn/semiabelian_aut",
    "title": "Semi-abelian automorphism (torus and abelian parts)",
    "type": "object",
    "properties": {
        "r": {"type": "integer", "minimum": 0},
        "g": {"type": "integer", "minimum": 0},
        "u_T": MATRIX_SCHEMA,
        "u_A_rat": MATRIX_SCHEMA,
    },
    "required": ["r", "g"],
    "additionalProperties": False,
}

FAMILY_DESCRIPTOR_SCHEMA = {
    "$id": "abdyn/family_descriptor",
    "title": "Degenerating family descriptor",
    "type": "object",
    "properties": {
        "g": {"type": "integer", "minimum": 1},
        "charpoly": POLYNOMIAL_SCHEMA,
        "r": {"anyOf": [{"type": "integer", "minimum": 0}, {"type": "null"}]},
        "k": {"anyOf": [{"type": "integer", "minimum": 0}, {"type": "null"}]},
        "finite_order": {"type": "boolean"},
    },
    "required": ["g", "charpoly"],
    "additionalProperties": False,
}

VERDICT_SCHEMA = {
    "$id": "abdyn/verdict",
    "title": "Regularizability verdict (output)",
    "type": "object",
    "properties": {
        "status": {"enum": ["Regularizable", "NotRegularizable", "Undetermined"]},
        "reasons": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"rule": {"type": "string"},
                               "theorem": {"type": "string"},
                               "detail": {"type": "string"}},
                "required": ["rule", "theorem", "detail"],
            },
            "minItems": 1,
        },
    },
    "required": ["status", "reasons"],
}

DEGREE_PROFILE_SCHEMA = {
    "$id": "abdyn/degree_profile",
    "title": "Dynamical degree profile (output)",
    "type": "object",
    "properties": {
        "lambdas": {"type": "array", "items": {"type": "number"}},
        "growth_exponents": {"type": "array",
                             "items": {"anyOf": [{"type": "integer"},
                                                 {"type": "null"}]}},
    },
    "required": ["lambdas", "growth_exponents"],
}

FAN_SCHEMA = {
    "$id": "abdyn/fan",
    "title": "Gamma-fundamental fan file",
    "type": "object",
    "properties": {
        "gamma": {
            "type": "object",
            "properties": {"g_prime": {"type": "integer", "minimum": 0},
                           "r_prime": {"type": "integer", "minimum": 1},
                           "Bprime": MATRIX_SCHEMA},
            "required": ["g_prime", "r_prime", "Bprime"],
        },
        "rays": {"type": "array",
                 "items": {"type": "array", "items": INT_LIKE}},
        "cones": {"type": "array",
                  "items": {"type": "array", "items": {"type": "integer"}}},
        "metric": {"type": "array",
                   "items": {"type": "array",
                             "items": {"type": "string",
                                       "pattern": "^-?[0-9]+(/[0-9]+)?$"}}},
        "seed": {"anyOf": [{"type": "integer"}, {"type": "null"}]},
    },
    "required": ["gamma", "rays", "cones"],
    "additionalProperties": False,
}

COMPLEX_SCHEMA = {"type": "array",
                  "items": {"type": "number"},
                  "minItems": 2, "maxItems": 2}

LATTICE_SCHEMA = {
    "$id": "abdyn/lattice",
    "title": "Numeric lattice in C^g: 2g complex basis vectors",
    "type": "object",
    "properties": {
        "g": {"type": "integer", "minimum": 1},
        "basis": {"type": "array",
                  "items": {"type": "array", "items": COMPLEX_SCHEMA}},
        "polarization": {"anyOf": [MATRIX_SCHEMA, {"type": "null"}]},
    },
    "required": ["g", "basis"],
    "additionalProperties": False,
}

ORBIT_REPORT_SCHEMA = {
    "$id": "abdyn/orbit_report",
    "title": "Orbit-closure report (output)",
    "type": "object",
    "properties": {
        "h": {"type": "integer"},
        "s": {"type": "integer"},
        "r": {"type": "integer"},
        "relations": {"type": "array"},
        "dense": {"type": "boolean"},
        "totally_real": {"type": "boolean"},
        "height_bound": {"type": "integer"},
        "tol": {"type": "number"},
    },
    "required": ["h", "s", "r", "relations", "dense", "totally_real"],
}

ALL_SCHEMAS = {
    "matrix": MATRIX_SCHEMA,
    "polynomial": POLYNOMIAL_SCHEMA,
    "semiabelian_aut": SEMIABELIAN_AUT_SCHEMA,
    "family_descriptor": FAMILY_DESCRIPTOR_SCHEMA,
    "verdict": VERDICT_SCHEMA,
    "degree_profile": DEGREE_PROFILE_SCHEMA,
    "fan": FAN_SCHEMA,
    "lattice": LATTICE_SCHEMA,
    "orbit_report": ORBIT_REPORT_SCHEMA,
}
