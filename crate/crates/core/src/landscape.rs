//! NK task environments.
//!
//! A solution is a binary string of `N` components. Component `i` contributes
//! a value looked up from its own table using the joint state of bit `i` and
//! the bits of its `K` dependencies. Raw payoff is the mean contribution;
//! agents see the transformed payoff `(raw / max_raw)^8`.
//!
//! Table states are indexed lexicographically over `(bit_i, dep_1, .., dep_K)`
//! with `bit_i` as the most significant bit.

use std::fmt;
use std::io::Write;

use rand::Rng;

use crate::error::{Error, Result};
use crate::seed::{rng_from_seed, SimRng};

/// Upper bound on `N` for anything that enumerates the whole solution space.
pub const ENUMERATION_LIMIT: usize = 24;
/// Upper bound on `N` for [`NkLandscape::count_local_optima`].
pub const LOCAL_OPTIMA_LIMIT: usize = 20;
/// Landscapes up to this size keep a full raw-payoff table in memory.
const CACHE_LIMIT: usize = 20;
/// Exponent of the payoff transform.
pub const PAYOFF_EXPONENT: i32 = 8;

const MAX_SOLUTION_LEN: usize = 32;

/// A point in the solution space: `len` binary components packed into a word.
///
/// Component `i` is stored in bit `i` of [`Solution::index`], so the packed
/// index doubles as the position in the enumeration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Solution {
    bits: u32,
    len: u8,
}

impl Solution {
    pub fn zeros(len: usize) -> Result<Self> {
        Self::from_index(0, len)
    }

    pub fn from_index(index: u32, len: usize) -> Result<Self> {
        if len == 0 || len > MAX_SOLUTION_LEN {
            return Err(Error::param(format!(
                "solution length must be in 1..={MAX_SOLUTION_LEN}, got {len}"
            )));
        }
        if len < 32 && index >> len != 0 {
            return Err(Error::param(format!(
                "index {index} does not fit in {len} bits"
            )));
        }
        Ok(Solution {
            bits: index,
            len: len as u8,
        })
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut packed = 0u32;
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 if i < MAX_SOLUTION_LEN => packed |= 1 << i,
                1 => {}
                other => {
                    return Err(Error::param(format!(
                        "component {i} has value {other}, expected 0 or 1"
                    )))
                }
            }
        }
        Self::from_index(packed, bits.len())
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Result<Self> {
        let mask = if len >= 32 {
            u32::MAX
        } else {
            (1u32 << len) - 1
        };
        Self::from_index(rng.random::<u32>() & mask, len)
    }

    #[inline]
    pub fn index(&self) -> u32 {
        self.bits
    }

    #[inline]
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn bit(&self, i: usize) -> u8 {
        debug_assert!(i < self.len());
        ((self.bits >> i) & 1) as u8
    }

    /// Copy with component `i` inverted.
    #[inline]
    pub fn flipped(&self, i: usize) -> Self {
        debug_assert!(i < self.len());
        Solution {
            bits: self.bits ^ (1 << i),
            len: self.len,
        }
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len()).map(|i| self.bit(i)).collect()
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.bit(i) == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Result of exhaustive maximization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GlobalMax {
    pub solution: Solution,
    pub raw_payoff: f64,
    /// Number of raw-payoff evaluations performed (always `2^N`).
    pub evaluations: u64,
}

#[derive(Clone, Debug)]
pub struct NkLandscape {
    n: usize,
    k: usize,
    dependencies: Vec<Vec<usize>>,
    tables: Vec<Vec<f64>>,
    max: GlobalMax,
    raw_cache: Option<Vec<f64>>,
    seed: Option<u64>,
}

impl NkLandscape {
    /// Draws a landscape: for each component, `K` distinct dependencies
    /// uniformly from the other components, then `2^(K+1)` uniform `[0,1)`
    /// contributions.
    pub fn new<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Self> {
        check_dimensions(n, k)?;
        let mut dependencies = Vec::with_capacity(n);
        let mut tables = Vec::with_capacity(n);
        for i in 0..n {
            let deps: Vec<usize> = rand::seq::index::sample(rng, n - 1, k)
                .into_iter()
                .map(|j| if j >= i { j + 1 } else { j })
                .collect();
            let table: Vec<f64> = (0..1usize << (k + 1)).map(|_| rng.random()).collect();
            dependencies.push(deps);
            tables.push(table);
        }
        Self::assemble(n, k, dependencies, tables, None)
    }

    /// Same as [`NkLandscape::new`] with a generator seeded from `seed`; the
    /// seed is recorded for [`NkLandscape::write_dump`].
    pub fn from_seed(n: usize, k: usize, seed: u64) -> Result<Self> {
        let mut rng: SimRng = rng_from_seed(seed);
        let mut landscape = Self::new(n, k, &mut rng)?;
        landscape.seed = Some(seed);
        Ok(landscape)
    }

    /// Builds a landscape from explicit dependency lists and tables.
    pub fn from_parts(dependencies: Vec<Vec<usize>>, tables: Vec<Vec<f64>>) -> Result<Self> {
        let n = dependencies.len();
        if tables.len() != n {
            return Err(Error::param(format!(
                "{n} dependency lists but {} tables",
                tables.len()
            )));
        }
        let k = dependencies.first().map_or(0, Vec::len);
        check_dimensions(n, k)?;
        for (i, deps) in dependencies.iter().enumerate() {
            if deps.len() != k {
                return Err(Error::param(format!(
                    "component {i} has {} dependencies, expected {k}",
                    deps.len()
                )));
            }
            for (pos, &j) in deps.iter().enumerate() {
                if j >= n || j == i || deps[..pos].contains(&j) {
                    return Err(Error::param(format!(
                        "component {i} has invalid dependency list {deps:?}"
                    )));
                }
            }
        }
        for (i, table) in tables.iter().enumerate() {
            if table.len() != 1 << (k + 1) {
                return Err(Error::param(format!(
                    "table {i} has {} entries, expected {}",
                    table.len(),
                    1usize << (k + 1)
                )));
            }
            if let Some(v) = table.iter().find(|v| !(0.0..1.0).contains(*v)) {
                return Err(Error::param(format!("table {i} holds {v}, outside [0, 1)")));
            }
        }
        Self::assemble(n, k, dependencies, tables, None)
    }

    fn assemble(
        n: usize,
        k: usize,
        dependencies: Vec<Vec<usize>>,
        tables: Vec<Vec<f64>>,
        seed: Option<u64>,
    ) -> Result<Self> {
        let mut landscape = NkLandscape {
            n,
            k,
            dependencies,
            tables,
            max: GlobalMax {
                solution: Solution::zeros(n)?,
                raw_payoff: 0.0,
                evaluations: 0,
            },
            raw_cache: None,
            seed,
        };
        if n <= CACHE_LIMIT {
            let cache: Vec<f64> = (0..1u32 << n).map(|x| landscape.evaluate(x)).collect();
            landscape.max = argmax_of(cache.iter().copied(), n);
            landscape.raw_cache = Some(cache);
        } else {
            landscape.max = landscape.enumerate_max();
        }
        Ok(landscape)
    }

    #[inline]
    pub fn n_components(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k_interdependence(&self) -> usize {
        self.k
    }

    pub fn dependencies(&self, component: usize) -> &[usize] {
        &self.dependencies[component]
    }

    pub fn table(&self, component: usize) -> &[f64] {
        &self.tables[component]
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Cached maximum raw payoff over the whole solution space.
    #[inline]
    pub fn max_raw_payoff(&self) -> f64 {
        self.max.raw_payoff
    }

    /// Table index of component `i` under the packed solution `x`.
    #[inline]
    fn state_index(&self, i: usize, x: u32) -> usize {
        let mut idx = ((x >> i) & 1) as usize;
        for &j in &self.dependencies[i] {
            idx = (idx << 1) | ((x >> j) & 1) as usize;
        }
        idx
    }

    #[inline]
    fn evaluate(&self, x: u32) -> f64 {
        let sum: f64 = (0..self.n)
            .map(|i| self.tables[i][self.state_index(i, x)])
            .sum();
        sum / self.n as f64
    }

    fn enumerate_max(&self) -> GlobalMax {
        argmax_of((0..1u32 << self.n).map(|x| self.evaluate(x)), self.n)
    }

    fn check_len(&self, sol: &Solution) -> Result<()> {
        if sol.len() != self.n {
            return Err(Error::param(format!(
                "solution has {} components, landscape has {}",
                sol.len(),
                self.n
            )));
        }
        Ok(())
    }

    /// Mean of the `N` looked-up contributions.
    pub fn raw_payoff(&self, sol: &Solution) -> Result<f64> {
        self.check_len(sol)?;
        Ok(self.raw_unchecked(sol))
    }

    /// `(raw / max_raw)^8`, in `[0, 1]`.
    pub fn payoff(&self, sol: &Solution) -> Result<f64> {
        self.check_len(sol)?;
        Ok(self.payoff_unchecked(sol))
    }

    #[inline]
    pub(crate) fn raw_unchecked(&self, sol: &Solution) -> f64 {
        match &self.raw_cache {
            Some(cache) => cache[sol.index() as usize],
            None => self.evaluate(sol.index()),
        }
    }

    #[inline]
    pub(crate) fn payoff_unchecked(&self, sol: &Solution) -> f64 {
        let ratio = self.raw_unchecked(sol) / self.max.raw_payoff;
        ratio.powi(PAYOFF_EXPONENT)
    }

    /// Exhaustively enumerates all `2^N` solutions. Ties go to the lowest
    /// packed index.
    pub fn global_max(&self) -> Result<GlobalMax> {
        if self.n > ENUMERATION_LIMIT {
            return Err(Error::Capacity {
                what: "N for enumeration",
                value: self.n,
                limit: ENUMERATION_LIMIT,
            });
        }
        Ok(self.enumerate_max())
    }

    /// Number of solutions strictly better than all `N` single-flip neighbors.
    pub fn count_local_optima(&self) -> Result<usize> {
        if self.n > LOCAL_OPTIMA_LIMIT {
            return Err(Error::Capacity {
                what: "N for local-optimum counting",
                value: self.n,
                limit: LOCAL_OPTIMA_LIMIT,
            });
        }
        let raw = |x: u32| match &self.raw_cache {
            Some(cache) => cache[x as usize],
            None => self.evaluate(x),
        };
        let count = (0..1u32 << self.n)
            .filter(|&x| {
                let v = raw(x);
                (0..self.n).all(|i| v > raw(x ^ (1 << i)))
            })
            .count();
        Ok(count)
    }

    /// Writes the plain-text dump: a `NK <N> <K> <seed>` header, then one
    /// line per component with its dependencies followed by its table.
    pub fn write_dump<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let seed = self.seed.map_or_else(|| "-".to_string(), |s| s.to_string());
        writeln!(w, "NK {} {} {}", self.n, self.k, seed)?;
        for (deps, table) in self.dependencies.iter().zip(&self.tables) {
            let mut fields: Vec<String> = deps.iter().map(usize::to_string).collect();
            fields.extend(table.iter().map(|v| format!("{v:.16e}")));
            writeln!(w, "{}", fields.join(" "))?;
        }
        Ok(())
    }

    pub fn to_dump_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_dump(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("dump is ASCII")
    }

    pub fn parse_dump(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Format {
            line: 1,
            message: "empty landscape dump".into(),
        })?;
        let head: Vec<&str> = header.split_whitespace().collect();
        let bad_header = || Error::Format {
            line: 1,
            message: format!("expected `NK <N> <K> <seed>`, got `{header}`"),
        };
        if head.len() != 4 || head[0] != "NK" {
            return Err(bad_header());
        }
        let n: usize = head[1].parse().map_err(|_| bad_header())?;
        let k: usize = head[2].parse().map_err(|_| bad_header())?;
        let seed = match head[3] {
            "-" => None,
            s => Some(s.parse::<u64>().map_err(|_| bad_header())?),
        };
        let mut dependencies = Vec::with_capacity(n);
        let mut tables = Vec::with_capacity(n);
        for (idx, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let lineno = idx + 1;
            if fields.len() != k + (1 << (k + 1)) {
                return Err(Error::Format {
                    line: lineno,
                    message: format!(
                        "expected {} fields, found {}",
                        k + (1 << (k + 1)),
                        fields.len()
                    ),
                });
            }
            let deps = fields[..k]
                .iter()
                .map(|f| f.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Format {
                    line: lineno,
                    message: format!("bad dependency index: {e}"),
                })?;
            let table = fields[k..]
                .iter()
                .map(|f| f.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Format {
                    line: lineno,
                    message: format!("bad table value: {e}"),
                })?;
            dependencies.push(deps);
            tables.push(table);
        }
        if dependencies.len() != n {
            return Err(Error::Format {
                line: text.lines().count(),
                message: format!("expected {n} component lines, found {}", dependencies.len()),
            });
        }
        let mut landscape = Self::from_parts(dependencies, tables)?;
        landscape.seed = seed;
        Ok(landscape)
    }
}

fn check_dimensions(n: usize, k: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::param("N must be at least 1"));
    }
    if k >= n {
        return Err(Error::param(format!("K must be in 0..={}, got {k}", n - 1)));
    }
    if n > ENUMERATION_LIMIT {
        return Err(Error::Capacity {
            what: "N",
            value: n,
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

fn argmax_of(values: impl Iterator<Item = f64>, n: usize) -> GlobalMax {
    let mut best_x = 0u32;
    let mut best = f64::NEG_INFINITY;
    let mut evaluations = 0u64;
    for (x, v) in values.enumerate() {
        evaluations += 1;
        if v > best {
            best = v;
            best_x = x as u32;
        }
    }
    GlobalMax {
        solution: Solution::from_index(best_x, n).expect("index within range"),
        raw_payoff: best,
        evaluations,
    }
}
