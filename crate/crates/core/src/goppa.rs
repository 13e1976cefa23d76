//! Twisted Goppa codes Γ(L, g, η) over GF(q).
//!
//! Column `i` of the parity-check matrix is the residue
//!
//! ```text
//! h_i(x) = (x - α_i)^{-1} mod g(x)  -  η · α_i^t / g(α_i)
//! ```
//!
//! read as a coefficient vector of length `t`. A word `c ∈ GF(q)^n` is a
//! codeword iff `Σ c_i h_i(x) ≡ 0 (mod g)`. The dimension over GF(q) is
//! obtained by expanding each GF(q^m) entry into its `m` base digits and
//! eliminating the resulting `mt × n` matrix.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::{Elem, Field, FieldDescription};
use crate::linalg::BaseMatrix;
use crate::poly::Polynomial;

/// Default cap on `q^n` for [`brute_force_dimension`].
pub const ENUMERATION_CAP: u64 = 1 << 20;

/// One twisted Goppa code instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeSpec {
    field: Field,
    support: Vec<Elem>,
    g: Polynomial,
    eta: Elem,
}

/// JSON form, e.g.
/// `{"q":2,"m":2,"t":2,"modulus":[1,1,1],"support":[0,1,2,3],"g":"2,1,1","eta":1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpecDescription {
    pub q: u32,
    pub m: u32,
    pub t: usize,
    pub modulus: Vec<u32>,
    pub support: Vec<u32>,
    pub g: String,
    pub eta: u32,
}

impl CodeSpec {
    pub fn new(field: &Field, support: Vec<Elem>, g: Polynomial, eta: Elem) -> Result<CodeSpec> {
        if g.field() != field {
            return Err(Error::FieldMismatch);
        }
        match g.degree() {
            Some(t) if t >= 1 => {}
            _ => return Err(Error::InvalidSpec("deg g must be at least 1".into())),
        }
        if support.is_empty() {
            return Err(Error::InvalidSpec("empty support".into()));
        }
        field
            .elem(eta.value() as u64)
            .map_err(|e| Error::InvalidSpec(e.to_string()))?;
        let mut seen = vec![false; field.order() as usize];
        for &alpha in &support {
            let slot = seen
                .get_mut(alpha.value() as usize)
                .ok_or_else(|| Error::InvalidSpec(format!("support point {alpha} out of range")))?;
            if std::mem::replace(slot, true) {
                return Err(Error::InvalidSpec(format!(
                    "support point {alpha} repeated"
                )));
            }
            if g.eval(alpha).is_zero() {
                return Err(Error::InvalidSpec(format!(
                    "support point {alpha} is a root of g"
                )));
            }
        }
        Ok(CodeSpec {
            field: field.clone(),
            support,
            g,
            eta,
        })
    }

    pub fn from_description(desc: &CodeSpecDescription) -> Result<CodeSpec> {
        let field = Field::from_description(&FieldDescription {
            q: desc.q,
            m: desc.m,
            modulus: desc.modulus.clone(),
        })?;
        let g = Polynomial::parse(&field, &desc.g)?;
        if g.degree() != Some(desc.t) {
            return Err(Error::InvalidSpec(format!(
                "t = {} but deg g = {:?}",
                desc.t,
                g.degree()
            )));
        }
        let support = desc
            .support
            .iter()
            .map(|&v| field.elem(v as u64))
            .collect::<Result<Vec<_>>>()?;
        let eta = field.elem(desc.eta as u64)?;
        CodeSpec::new(&field, support, g, eta)
    }

    pub fn description(&self) -> CodeSpecDescription {
        CodeSpecDescription {
            q: self.field.q(),
            m: self.field.m(),
            t: self.t(),
            modulus: self.field.modulus().to_vec(),
            support: self.support.iter().map(|e| e.value()).collect(),
            g: self.g.to_string(),
            eta: self.eta.value(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn support(&self) -> &[Elem] {
        &self.support
    }

    pub fn g(&self) -> &Polynomial {
        &self.g
    }

    pub fn eta(&self) -> Elem {
        self.eta
    }

    pub fn n(&self) -> usize {
        self.support.len()
    }

    pub fn t(&self) -> usize {
        self.g.degree().expect("validated")
    }

    /// Same code with a different support order or twist.
    pub fn with_support(&self, support: Vec<Elem>) -> Result<CodeSpec> {
        CodeSpec::new(&self.field, support, self.g.clone(), self.eta)
    }

    /// The residue `h_i` for column `i` (0-based).
    pub fn twist_residue(&self, i: usize) -> Result<Polynomial> {
        let alpha = *self.support.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            n: self.n(),
        })?;
        let f = &self.field;
        let classical = Polynomial::linear(f, alpha).modinv(&self.g)?;
        let twist = f.mul(
            f.mul(self.eta, f.pow(alpha, self.t() as u64)),
            f.inv(self.g.eval(alpha))?,
        );
        classical.sub(&Polynomial::constant(f, twist))
    }

    fn residues(&self) -> Result<Vec<Polynomial>> {
        (0..self.n()).map(|i| self.twist_residue(i)).collect()
    }
}

/// The twist `η = g_t² / g_{t-1}` (when `g_{t-1} ≠ 0`).
///
/// Modulo the other `t - 1` residue rows, the twisted constant row is the
/// functional `c ↦ Σ c_i (g_t α_i^{t-1} + η α_i^t) / g(α_i)`. For this one η
/// it becomes a GF(q^m)-multiple of `Σ c_i`, which imposes a single GF(q)
/// condition instead of `m`, so the dimension typically rises by `m - 1`.
pub fn degenerate_twist(g: &Polynomial) -> Option<Elem> {
    let f = g.field();
    let t = g.degree()?;
    if t == 0 {
        return None;
    }
    let (lead, next) = (g.coeff(t), g.coeff(t - 1));
    f.div(f.mul(lead, lead), next).ok()
}

/// Parity-check matrix over GF(q^m) and its expansion over GF(q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityMatrix {
    pub q: u32,
    pub m: u32,
    pub t: usize,
    pub n: usize,
    /// `t × n`; row `j` holds the `x^j` coefficient of every residue.
    pub ext_rows: Vec<Vec<Elem>>,
    /// `mt × n`; row `j·m + d` holds digit `d` of `ext_rows[j]`.
    pub base_rows: BaseMatrix,
}

/// JSON export for external verification.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParityMatrixExport {
    pub q: u32,
    pub m: u32,
    pub t: usize,
    pub n: usize,
    pub ext_rows: Vec<Vec<u32>>,
    pub base_rows: Vec<Vec<u32>>,
}

impl ParityMatrix {
    pub fn export(&self) -> ParityMatrixExport {
        ParityMatrixExport {
            q: self.q,
            m: self.m,
            t: self.t,
            n: self.n,
            ext_rows: self
                .ext_rows
                .iter()
                .map(|r| r.iter().map(|e| e.value()).collect())
                .collect(),
            base_rows: self.base_rows.to_rows(),
        }
    }

    /// Reassembles the extension-field rows from the digit rows.
    pub fn collapse(&self, field: &Field) -> Result<Vec<Vec<Elem>>> {
        let m = self.m as usize;
        (0..self.t)
            .map(|j| {
                (0..self.n)
                    .map(|col| {
                        let digits: Vec<u32> =
                            (0..m).map(|d| self.base_rows.get(j * m + d, col)).collect();
                        field.from_base(&digits)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.base_rows.rank()
    }
}

pub fn parity_matrix(spec: &CodeSpec) -> Result<ParityMatrix> {
    let f = spec.field();
    let (t, n, m) = (spec.t(), spec.n(), f.m() as usize);
    let mut ext_rows = vec![vec![Elem::ZERO; n]; t];
    let mut base_rows = BaseMatrix::zeros(f.q(), m * t, n);
    for (col, h) in spec.residues()?.into_iter().enumerate() {
        for (j, row) in ext_rows.iter_mut().enumerate() {
            let c = h.coeff(j);
            row[col] = c;
            for (d, digit) in f.expand_to_base(c).into_iter().enumerate() {
                base_rows.set(j * m + d, col, digit);
            }
        }
    }
    Ok(ParityMatrix {
        q: f.q(),
        m: f.m(),
        t,
        n,
        ext_rows,
        base_rows,
    })
}

/// `k = n - rank`.
pub fn dimension(spec: &CodeSpec) -> Result<usize> {
    Ok(spec.n() - parity_matrix(spec)?.rank())
}

pub fn kernel_basis(spec: &CodeSpec) -> Result<Vec<Vec<u32>>> {
    Ok(parity_matrix(spec)?.base_rows.kernel_basis())
}

fn check_word(spec: &CodeSpec, word: &[u32]) -> Result<()> {
    if word.len() != spec.n() {
        return Err(Error::LengthMismatch {
            expected: spec.n(),
            got: word.len(),
        });
    }
    let q = spec.field().q();
    if let Some((position, &value)) = word.iter().enumerate().find(|(_, &v)| v >= q) {
        return Err(Error::EntryOutOfRange { position, value, q });
    }
    Ok(())
}

/// Evaluates the defining congruence `Σ c_i h_i(x) ≡ 0 (mod g)` directly.
pub fn is_codeword(spec: &CodeSpec, word: &[u32]) -> Result<bool> {
    check_word(spec, word)?;
    let f = spec.field();
    let mut acc = Polynomial::zero(f);
    for (i, &c) in word.iter().enumerate() {
        if c != 0 {
            acc = acc.add(&spec.twist_residue(i)?.scale(f.from_prime(c)))?;
        }
    }
    Ok(acc.rem(spec.g())?.is_zero())
}

/// Counts codewords among all `q^n` words and returns `log_q` of the count.
pub fn brute_force_dimension(spec: &CodeSpec) -> Result<usize> {
    brute_force_dimension_with_cap(spec, ENUMERATION_CAP)
}

pub fn brute_force_dimension_with_cap(spec: &CodeSpec, cap: u64) -> Result<usize> {
    let f = spec.field();
    let (q, n, t) = (f.q(), spec.n(), spec.t());
    let total = (q as u64)
        .checked_pow(n as u32)
        .filter(|&total| total <= cap)
        .ok_or(Error::CapExceeded { q, n, cap })?;
    let residues: Vec<Vec<Elem>> = spec
        .residues()?
        .iter()
        .map(|h| (0..t).map(|j| h.coeff(j)).collect())
        .collect();
    // odometer over GF(q)^n; bumping digit i by one adds h_i to the sum,
    // including the wrap q-1 -> 0 since q·h_i = 0
    let mut digits = vec![0u32; n];
    let mut sum = vec![Elem::ZERO; t];
    let mut count: u64 = 1; // the zero word
    for _ in 1..total {
        let mut i = 0;
        loop {
            for (s, &h) in sum.iter_mut().zip(&residues[i]) {
                *s = f.add(*s, h);
            }
            digits[i] += 1;
            if digits[i] < q {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if sum.iter().all(|s| s.is_zero()) {
            count += 1;
        }
    }
    let mut k = 0;
    let mut size = 1u64;
    while size < count {
        size *= q as u64;
        k += 1;
    }
    if size != count {
        return Err(Error::NotAPowerOfQ { count, q });
    }
    Ok(k)
}

/// True iff both specs define the same subspace of GF(q)^n.
pub fn codes_equal(a: &CodeSpec, b: &CodeSpec) -> Result<bool> {
    if a.field().q() != b.field().q() || a.n() != b.n() {
        return Err(Error::ShapeMismatch(format!(
            "q={} n={} vs q={} n={}",
            a.field().q(),
            a.n(),
            b.field().q(),
            b.n()
        )));
    }
    if dimension(a)? != dimension(b)? {
        return Ok(false);
    }
    for v in kernel_basis(a)? {
        if !is_codeword(b, &v)? {
            return Ok(false);
        }
    }
    Ok(true)
}
