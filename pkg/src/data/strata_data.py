"""
Stratum tables of the resolutions.

Degree terms are ``[offset, slope, dim]``: the Borel-Moore group of the open
stratum has dimension ``dim`` in total degree ``offset + slope * k``. Twist
tags name rank-1 local systems on the base: "trivial", "or" (orientation),
"pm" (sign of the point permutation) and "or+pm".
"""

# Common zeros of k quadratic forms in R^3. The stratum of four points in
# general position is merged into the one of conics through five points.
QUADRATIC_STRATA = [
    {
        "p": 1,
        "base": "RP2",
        "fiber_vector_dim": 5,
        "fiber_cell_dim": 0,
        "twist": {"even": "trivial", "odd": "trivial"},
        "summand_twist": "trivial",
        "bm_homology": {"even": [[0, 5, 1]], "odd": [[0, 5, 1]]},
        "trusted": [
            "forms vanishing on a line are cooriented by their growth along the line",
        ],
    },
    {
        "p": 2,
        "base": "B(RP2,2)",
        "fiber_vector_dim": 4,
        "fiber_cell_dim": 1,
        "twist": {"even": "pm", "odd": "trivial"},
        "summand_twist": "pm",
        "bm_homology": {"even": [], "odd": []},
        "trusted": [],
    },
    {
        "p": 3,
        "base": "B(RP2,3)",
        "fiber_vector_dim": 3,
        "fiber_cell_dim": 2,
        "twist": {"even": "pm", "odd": "trivial"},
        "summand_twist": "pm",
        "bm_homology": {"even": [], "odd": []},
        "trusted": [
            "an odd permutation of the three points reverses the open triangle fiber",
        ],
    },
    {
        "p": 4,
        "base": "RP2-dual",
        "fiber_vector_dim": 3,
        "fiber_cell_dim": 6,
        "twist": {"even": "or", "odd": "trivial"},
        "summand_twist": "or",
        "bm_homology": {"even": [[8, 3, 1]], "odd": [[6, 3, 1]]},
        "trusted": [
            "link of the order complex of a line is the triple self-join of a circle, a 5-sphere",
        ],
    },
    {
        "p": 5,
        "base": "Bx(RP2,4)",
        "fiber_vector_dim": 3,
        "fiber_cell_dim": 3,
        "twist": {"even": "pm", "odd": "trivial"},
        "summand_twist": "pm",
        "bm_homology": {"even": [], "odd": []},
        "trusted": [],
    },
    {
        "p": 6,
        "base": "RP2",
        "fiber_vector_dim": 2,
        "fiber_cell_dim": 9,
        "twist": {"even": "trivial", "odd": "or"},
        "summand_twist": "or",
        "bm_homology": {"even": [[9, 2, 1]], "odd": [[11, 2, 1]]},
        "trusted": [
            "link of the order complex of a line and a point off it is a homotopy 6-sphere",
            "line and point configurations form a plane bundle over the point",
        ],
    },
    {
        "p": 7,
        "base": "B(RP2-dual,2)",
        "fiber_vector_dim": 1,
        "fiber_cell_dim": 8,
        "twist": {"even": "trivial", "odd": "or"},
        "summand_twist": "or",
        "bm_homology": {"even": [], "odd": [[9, 1, 1], [12, 1, 1]]},
        "trusted": [
            "link of the order complex of two crossing lines has the homology of S^7",
        ],
    },
    {
        "p": 8,
        "base": "RP2",
        "fiber_vector_dim": 1,
        "fiber_cell_dim": 11,
        "twist": {"even": "or", "odd": "or"},
        "summand_twist": "trivial",
        "bm_homology": {"even": [[13, 1, 1]], "odd": [[13, 1, 1]]},
        "trusted": [
            "orientation of the nonsingular conic stratum over its center",
        ],
    },
    {
        "p": 9,
        "base": "point",
        "fiber_vector_dim": 0,
        "fiber_cell_dim": 14,
        "twist": {"even": "trivial", "odd": "trivial"},
        "summand_twist": "trivial",
        "bm_homology": {"even": [[14, 0, 1]], "odd": [[14, 0, 1]]},
        "trusted": [
            "cone over the link of the whole plane; the link is recomputed by the k=0/k=1 solve",
        ],
    },
]

# Common zeros of k linear forms in R^3.
LINEAR_STRATA = [
    {
        "p": 1,
        "base": "RP2",
        "fiber_vector_dim": 2,
        "fiber_cell_dim": 0,
        "twist": {"even": "trivial", "odd": "or"},
        "summand_twist": "or",
        "bm_homology": {"even": [[0, 2, 1]], "odd": [[2, 2, 1]]},
        "trusted": [],
    },
    {
        "p": 2,
        "base": "RP2-dual",
        "fiber_vector_dim": 1,
        "fiber_cell_dim": 2,
        "twist": {"even": "or", "odd": "trivial"},
        "summand_twist": "or",
        "bm_homology": {"even": [[4, 1, 1]], "odd": [[2, 1, 1]]},
        "trusted": [],
    },
    {
        "p": 3,
        "base": "point",
        "fiber_vector_dim": 0,
        "fiber_cell_dim": 5,
        "twist": {"even": "trivial", "odd": "trivial"},
        "summand_twist": "trivial",
        "bm_homology": {"even": [[5, 0, 1]], "odd": [[5, 0, 1]]},
        "trusted": [
            "order complex of proper linear subspaces of R^3 is a 4-sphere",
        ],
    },
]

# Differentials known from geometry rather than forced by dimensions.
# Source row is q = q_offset + q_slope * k.
KNOWN_DIFFERENTIALS = [
    {
        "parity": "odd",
        "page": 1,
        "source_p": 8,
        "q_offset": 5,
        "q_slope": 1,
        "rank": 1,
        "citation": "boundary orientations of the conic stratum agree for odd k",
    },
]

# Unknown entries of the ninth column at k = 1, present exactly when the
# second differential of the k = 0 sequence vanishes.
LINK_UNKNOWNS = {"variable": "x", "entries": [[9, 0], [9, 1]]}
LINK_TARGETS = {
    # One form: two contractible components of definite forms.
    "k1": {"5": 1},
    # Homology of the link of the whole plane.
    "k0": {"0": 1, "13": 1},
}

# Circle configuration strata: j points give an open (j-1)-simplex bundle.
SELF_JOIN_MAX_R = 6
