//! Constructors for the measurement families used throughout: standard
//! bases, Heisenberg-Weyl SICs, Platonic-solid designs, the d = 4 MUB
//! triple family, complete MUBs in prime dimension, and random POVMs.

use std::f64::consts::PI;

use crate::designs::{design_to_povm, random_one_design, WeightedStateSet};
use crate::error::{Error, Result};
use crate::linalg::eigen::inverse_sqrt;
use crate::linalg::matrix::{basis_ket, bloch_operator, ComplexMatrix, Ket, C64};
use crate::linalg::random::{random_psd, seeded};
use crate::povm::{element_rank, Povm};

fn omega(d: usize, power: usize) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * (power % d) as f64 / d as f64)
}

/// Rank-1 projective POVM from the columns of a unitary (or any orthonormal kets).
pub fn povm_from_basis(d: usize, kets: &[Ket]) -> Result<Povm> {
    Povm::from_elements(d, kets.iter().map(|k| ComplexMatrix::projector(k)).collect())
}

pub fn computational_basis(d: usize) -> Povm {
    povm_from_basis(d, &(0..d).map(|j| basis_ket(d, j)).collect::<Vec<_>>()).expect("computational basis")
}

/// Columns of the discrete Fourier matrix `F_{jk} = omega^{jk} / sqrt(d)`.
pub fn fourier_basis(d: usize) -> Povm {
    let s = 1.0 / (d as f64).sqrt();
    let kets: Vec<Ket> = (0..d).map(|k| (0..d).map(|j| omega(d, j * k) * s).collect()).collect();
    povm_from_basis(d, &kets).expect("Fourier basis")
}

/// Generators of the Heisenberg-Weyl group: `X|j> = |j+1>`, `Z|j> = omega^j |j>`.
#[derive(Debug, Clone)]
pub struct HeisenbergWeylPair {
    pub d: usize,
    pub x: ComplexMatrix,
    pub z: ComplexMatrix,
}

impl HeisenbergWeylPair {
    pub fn new(d: usize) -> Self {
        let mut x = ComplexMatrix::zeros(d);
        let mut z = ComplexMatrix::zeros(d);
        for j in 0..d {
            x[((j + 1) % d, j)] = C64::new(1.0, 0.0);
            z[(j, j)] = omega(d, j);
        }
        Self { d, x, z }
    }

    /// `X^j Z^k`
    pub fn displacement(&self, j: usize, k: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::identity(self.d);
        for _ in 0..j % self.d {
            m = &self.x * &m;
        }
        for _ in 0..k % self.d {
            m = &m * &self.z;
        }
        m
    }
}

/// Heisenberg-Weyl orbit `{(1/d) D_jk |psi><psi| D_jk^†}` with `j` outer and `k` inner.
pub fn hw_orbit(fiducial: &[C64]) -> Result<Povm> {
    let d = fiducial.len();
    let hw = HeisenbergWeylPair::new(d);
    let mut elements = Vec::with_capacity(d * d);
    let mut labels = Vec::with_capacity(d * d);
    for j in 0..d {
        for k in 0..d {
            let v = hw.displacement(j, k).apply(fiducial);
            elements.push(ComplexMatrix::projector(&v).scale_real(1.0 / d as f64));
            labels.push(format!("{j}{k}"));
        }
    }
    Povm::new(d, elements, Some(labels))
}

/// Fiducial `(0, 1, -e^{i phi}) / sqrt(2)` of the one-parameter family of SICs in d = 3.
pub fn sic_d3_fiducial(phi: f64) -> Ket {
    let s = 1.0 / 2f64.sqrt();
    vec![C64::new(0.0, 0.0), C64::new(s, 0.0), -C64::from_polar(s, phi)]
}

pub fn sic_d3(phi: f64) -> Povm {
    hw_orbit(&sic_d3_fiducial(phi)).expect("HW orbit of a SIC fiducial")
}

const TETRAHEDRON: [[f64; 3]; 4] = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];

/// Qubit SIC on the vertices of a regular tetrahedron.
pub fn sic_d2_tetrahedron() -> Povm {
    let s = 1.0 / 3f64.sqrt();
    let elements = TETRAHEDRON
        .iter()
        .map(|r| bloch_operator(0.25, [r[0] * s * 0.25, r[1] * s * 0.25, r[2] * s * 0.25]))
        .collect();
    Povm::from_elements(2, elements).expect("tetrahedral SIC")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlatonicSolid {
    Tetrahedron,
    Octahedron,
    Cube,
    Icosahedron,
    Dodecahedron,
}

impl PlatonicSolid {
    pub const ALL: [PlatonicSolid; 5] = [
        PlatonicSolid::Tetrahedron,
        PlatonicSolid::Octahedron,
        PlatonicSolid::Cube,
        PlatonicSolid::Icosahedron,
        PlatonicSolid::Dodecahedron,
    ];

    /// Design strength of the vertex set on the Bloch sphere.
    pub fn design_order(self) -> u32 {
        match self {
            PlatonicSolid::Tetrahedron => 2,
            PlatonicSolid::Octahedron | PlatonicSolid::Cube => 3,
            PlatonicSolid::Icosahedron | PlatonicSolid::Dodecahedron => 5,
        }
    }

    /// Unit vertex vectors.
    pub fn vertices(self) -> Vec<[f64; 3]> {
        let g = (1.0 + 5f64.sqrt()) / 2.0;
        let cyclic = |v: [f64; 3]| [v, [v[2], v[0], v[1]], [v[1], v[2], v[0]]];
        let signs = |v: [f64; 3]| {
            let mut out = Vec::new();
            for sx in [1.0, -1.0] {
                for sy in [1.0, -1.0] {
                    for sz in [1.0, -1.0] {
                        let w = [v[0] * sx, v[1] * sy, v[2] * sz];
                        if !out.contains(&w) {
                            out.push(w);
                        }
                    }
                }
            }
            out
        };
        let raw: Vec<[f64; 3]> = match self {
            PlatonicSolid::Tetrahedron => TETRAHEDRON.to_vec(),
            PlatonicSolid::Octahedron => {
                vec![[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]
            }
            PlatonicSolid::Cube => signs([1.0, 1.0, 1.0]),
            PlatonicSolid::Icosahedron => cyclic([0.0, 1.0, g]).into_iter().flat_map(signs).collect(),
            PlatonicSolid::Dodecahedron => {
                let mut v = signs([1.0, 1.0, 1.0]);
                v.extend(cyclic([0.0, 1.0 / g, g]).into_iter().flat_map(signs));
                v
            }
        };
        raw.into_iter()
            .map(|v| {
                let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                [v[0] / n, v[1] / n, v[2] / n]
            })
            .collect()
    }
}

/// Pure qubit state with Bloch vector `r` (unit length).
pub fn bloch_ket(r: [f64; 3]) -> Ket {
    let theta = r[2].clamp(-1.0, 1.0).acos();
    let phi = r[1].atan2(r[0]);
    vec![C64::new((theta / 2.0).cos(), 0.0), C64::from_polar((theta / 2.0).sin(), phi)]
}

/// Vertex states of a Platonic solid with uniform weights `2/m`.
pub fn platonic_design(solid: PlatonicSolid) -> WeightedStateSet {
    let states: Vec<Ket> = solid.vertices().into_iter().map(bloch_ket).collect();
    WeightedStateSet::uniform(2, states).expect("Platonic vertex set")
}

/// Parameters of the d = 4 MUB triple family, each in `[0, pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MubTripleParams {
    x: f64,
    y: f64,
    z: f64,
}

impl MubTripleParams {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        for (name, v) in [("x", x), ("y", y), ("z", z)] {
            if !(0.0..PI).contains(&v) {
                return Err(Error::DomainError(format!("{name} = {v} outside [0, pi)")));
            }
        }
        Ok(Self { x, y, z })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }
}

/// The two Hadamard matrices whose columns give the second and third bases.
pub fn mub_triple_hadamards(params: MubTripleParams) -> (ComplexMatrix, ComplexMatrix) {
    let r = |v: f64| C64::new(v, 0.0);
    let ex = C64::from_polar(1.0, params.x);
    let ey = C64::from_polar(1.0, params.y);
    let ez = C64::from_polar(1.0, params.z);
    let i = C64::new(0.0, 1.0);
    let h1 = [
        [r(1.0), r(1.0), r(1.0), r(1.0)],
        [r(1.0), r(1.0), r(-1.0), r(-1.0)],
        [r(1.0), r(-1.0), i * ex, -i * ex],
        [r(1.0), r(-1.0), -i * ex, i * ex],
    ];
    let h2 = [
        [r(1.0), r(1.0), r(1.0), r(1.0)],
        [r(1.0), r(1.0), r(-1.0), r(-1.0)],
        [-ey, ey, ez, -ez],
        [ey, -ey, ez, -ez],
    ];
    let to_matrix = |h: [[C64; 4]; 4]| ComplexMatrix::from_fn(4, |a, b| h[a][b] * 0.5);
    (to_matrix(h1), to_matrix(h2))
}

/// Computational basis plus the column bases of the two Hadamard matrices.
pub fn mub_triple_d4(params: MubTripleParams) -> (Povm, Povm, Povm) {
    let (h1, h2) = mub_triple_hadamards(params);
    let cols = |h: &ComplexMatrix| (0..4).map(|k| h.column(k)).collect::<Vec<_>>();
    (
        computational_basis(4),
        povm_from_basis(4, &cols(&h1)).expect("Hadamard columns are orthonormal"),
        povm_from_basis(4, &cols(&h2)).expect("Hadamard columns are orthonormal"),
    )
}

/// Normalized triple products `f_jkl = tr(A_j B_k C_l) / (tr A_j tr B_k tr C_l)`,
/// flattened with `j` outermost.
pub fn triple_products(a: &Povm, b: &Povm, c: &Povm) -> Result<Vec<C64>> {
    for e in a.elements().iter().chain(b.elements()).chain(c.elements()) {
        let rank = element_rank(e);
        if rank != 1 {
            return Err(Error::NotRank1(rank));
        }
    }
    let (ta, tb, tc) = (a.traces(), b.traces(), c.traces());
    let mut out = Vec::with_capacity(a.len() * b.len() * c.len());
    for (aj, x) in a.elements().iter().zip(&ta) {
        for (bk, y) in b.elements().iter().zip(&tb) {
            let ab = aj * bk;
            for (cl, z) in c.elements().iter().zip(&tc) {
                out.push(ab.trace_product(cl) / (x * y * z));
            }
        }
    }
    Ok(out)
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

/// Complete set of `d + 1` MUBs for prime `d`: the Pauli eigenbases for
/// `d = 2`, and the computational basis plus the quadratic-phase bases
/// `(1/sqrt d) sum_j omega^{a j^2 + b j} |j>` for odd primes.
pub fn complete_mub(d: usize) -> Result<Vec<Povm>> {
    if !is_prime(d) {
        return Err(Error::BadCount(format!("complete MUBs are built only for prime d, got {d}")));
    }
    if d == 2 {
        let s = 1.0 / 2f64.sqrt();
        let r = |v: f64| C64::new(v, 0.0);
        let i = C64::new(0.0, s);
        let z = vec![basis_ket(2, 0), basis_ket(2, 1)];
        let x = vec![vec![r(s), r(s)], vec![r(s), r(-s)]];
        let y = vec![vec![r(s), i], vec![r(s), -i]];
        return [z, x, y].iter().map(|k| povm_from_basis(2, k)).collect();
    }
    let s = 1.0 / (d as f64).sqrt();
    let mut family = vec![computational_basis(d)];
    for a in 0..d {
        let kets: Vec<Ket> = (0..d).map(|b| (0..d).map(|j| omega(d, a * j * j + b * j) * s).collect()).collect();
        family.push(povm_from_basis(d, &kets)?);
    }
    Ok(family)
}

/// Random rank-1 POVM with `m` elements (a random weighted 1-design).
pub fn random_rank1_povm(d: usize, m: usize, seed: u64) -> Result<Povm> {
    let mut rng = seeded(seed);
    design_to_povm(&random_one_design(&mut rng, d, m)?)
}

/// Random POVM `A_j = S^{-1/2} G_j S^{-1/2}` from random PSD blocks `G_j` of random rank.
pub fn random_povm(d: usize, m: usize, seed: u64) -> Result<Povm> {
    use rand::Rng;
    if m == 0 {
        return Err(Error::BadCount("a POVM needs at least one element".into()));
    }
    let mut rng = seeded(seed);
    loop {
        let blocks: Vec<ComplexMatrix> = (0..m)
            .map(|_| {
                let rank = rng.random_range(1..=d);
                random_psd(&mut rng, d, rank)
            })
            .collect();
        let mut s = ComplexMatrix::zeros(d);
        for g in &blocks {
            s += g;
        }
        let Ok(root) = inverse_sqrt(&s) else { continue };
        let elements = blocks.iter().map(|g| (&(&root * g) * &root).hermitian_part()).collect();
        return Povm::from_elements(d, elements);
    }
}

/// Binary qubit POVM `A_± = (1 ± alpha ± a.sigma) / 2`.
pub fn qubit_binary_povm(alpha: f64, a: [f64; 3]) -> Result<Povm> {
    let norm = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    if !(0.0..1.0).contains(&alpha) || norm > 1.0 - alpha + 1e-12 {
        return Err(Error::DomainError(format!("need 0 <= alpha < 1 and |a| <= 1 - alpha, got alpha = {alpha}, |a| = {norm}")));
    }
    let plus = bloch_operator((1.0 + alpha) / 2.0, [a[0] / 2.0, a[1] / 2.0, a[2] / 2.0]);
    let minus = bloch_operator((1.0 - alpha) / 2.0, [-a[0] / 2.0, -a[1] / 2.0, -a[2] / 2.0]);
    Povm::new(2, vec![plus, minus], Some(vec!["+".into(), "-".into()]))
}
