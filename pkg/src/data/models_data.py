# Six-vertex real projective plane (10 triangles, every pair of vertices is an edge).
RP2_TRIANGLES = [
    (0, 1, 4),
    (0, 1, 5),
    (0, 2, 3),
    (0, 2, 4),
    (0, 3, 5),
    (1, 2, 3),
    (1, 2, 5),
    (1, 3, 4),
    (2, 4, 5),
    (3, 4, 5),
]

# Edges carrying -1 in the orientation cocycle of RP2_TRIANGLES.
# Flat on all ten triangles; the loop 0-1-2 has monodromy -1.
RP2_ORIENTATION_NEGATIVE_EDGES = [(1, 2), (1, 3), (2, 5), (3, 4), (4, 5)]

# Upper-triangle order of a symmetric 3x3 form: a11, a12, a13, a22, a23, a33.
FORM_ORDER = ("a11", "a12", "a13", "a22", "a23", "a33")

# (x^2, y^2, z^2): its image misses the negative octant, mod 2 degree 0.
DEGREE_ZERO_WITNESS = [
    [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
]

# Three circles of radius 1.2 in the chart z = 1, f = (x - a z)^2 + (y - b z)^2 - r^2 z^2.
# The only preimage of -(1, 1, 1) is the circumcenter of the centers, a regular point.
DEGREE_ONE_CIRCLES = {
    "centers": [(0.0, 1.0), (-0.87, -0.5), (0.87, -0.5)],
    "radius": 1.2,
}
DEGREE_ONE_VALUE = (-1.0, -1.0, -1.0)
DEGREE_ONE_PREIMAGE = (0.0, -0.0023, 1.0)
