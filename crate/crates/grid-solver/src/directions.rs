//! Integer lattice direction sets for the wide stencil.
//!
//! Each supported level lists one representative per undirected line; the
//! directed ray count `n_dirs` is twice the line count. Every vector is
//! coprime (so the open segment to the neighbour contains no lattice point),
//! the set is closed under the eight square symmetries, each line has its
//! 90-degree rotation in the set, and both axes are always present.

const L4: &[(i32, i32)] = &[(1, 0), (0, 1)];

const L8: &[(i32, i32)] = &[(1, 0), (0, 1), (1, 1), (1, -1)];

const L16: &[(i32, i32)] = &[
    (1, 0),
    (0, 1),
    (1, 1),
    (1, -1),
    (2, 1),
    (1, 2),
    (1, -2),
    (2, -1),
];

const L24: &[(i32, i32)] = &[
    (1, 0),
    (0, 1),
    (1, 1),
    (1, -1),
    (2, 1),
    (1, 2),
    (1, -2),
    (2, -1),
    (3, 1),
    (1, 3),
    (1, -3),
    (3, -1),
];

const L40: &[(i32, i32)] = &[
    (1, 0),
    (0, 1),
    (1, 1),
    (1, -1),
    (2, 1),
    (1, 2),
    (1, -2),
    (2, -1),
    (3, 1),
    (1, 3),
    (1, -3),
    (3, -1),
    (3, 2),
    (2, 3),
    (2, -3),
    (3, -2),
    (4, 1),
    (1, 4),
    (1, -4),
    (4, -1),
];

/// Undirected line representatives for a supported ray count.
pub(crate) fn line_set(n_dirs: usize) -> Option<&'static [(i32, i32)]> {
    match n_dirs {
        4 => Some(L4),
        8 => Some(L8),
        16 => Some(L16),
        24 => Some(L24),
        40 => Some(L40),
        _ => None,
    }
}

pub(crate) const SUPPORTED_N_DIRS: &[usize] = &[4, 8, 16, 24, 40];
