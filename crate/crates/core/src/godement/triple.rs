use std::collections::BTreeMap;
use std::sync::Arc;

use super::GodementError;
use crate::complexes::{ChainMap, CochainComplex, Degree};
use crate::exactlin::Matrix;
use crate::site::{block_sum, Sheaf, SheafMap};

fn ups(f: &Sheaf, x: usize) -> Vec<usize> {
    f.poset().up(x).members().to_vec()
}

fn sizes(f: &Sheaf, over: &[usize], n: Degree) -> Vec<usize> {
    if over.is_empty() {
        vec![0]
    } else {
        over.iter().map(|&y| f.stalk(y).dim(n)).collect()
    }
}

/// `T(F)`: `(TF)_x = ⊕_{y ≥ x} F_y`; the restriction `x → x'` projects onto
/// the factors `y ≥ x'`.
pub fn t_sheaf(f: &Sheaf) -> Sheaf {
    let poset = f.poset();
    let field = f.field();
    let stalks: Vec<Arc<CochainComplex>> = poset
        .elements()
        .map(|x| {
            let parts: Vec<&CochainComplex> = ups(f, x).iter().map(|&y| f.stalk(y).as_ref()).collect();
            Arc::new(block_sum(field, &parts))
        })
        .collect();
    let mut restrictions = BTreeMap::new();
    for x in poset.elements() {
        for x2 in poset.elements().filter(|&x2| poset.lt(x, x2)) {
            let (ux, ux2) = (ups(f, x), ups(f, x2));
            let m = ChainMap::from_fn_unchecked(stalks[x].clone(), stalks[x2].clone(), |n| {
                let ids: Vec<Matrix> = ux2.iter().map(|&y| Matrix::identity(field, f.stalk(y).dim(n))).collect();
                let blocks = ux2.iter().enumerate().map(|(r, y)| (r, ux.iter().position(|z| z == y).unwrap(), &ids[r]));
                Matrix::from_blocks(field, &sizes(f, &ux2, n), &sizes(f, &ux, n), blocks)
            });
            restrictions.insert((x, x2), m);
        }
    }
    Sheaf::from_parts_unchecked(poset.clone(), field, stalks, restrictions)
}

/// `T(g)`: `(Tg)_x = ⊕_{y ≥ x} g_y`.
pub fn t_map(g: &SheafMap, ts: &Arc<Sheaf>, tt: &Arc<Sheaf>) -> SheafMap {
    let (s, t) = (g.source(), g.target());
    let field = s.field();
    let comps = s
        .poset()
        .elements()
        .map(|x| {
            let u = ups(s, x);
            ChainMap::from_fn_unchecked(ts.stalk(x).clone(), tt.stalk(x).clone(), |n| {
                let parts: Vec<Matrix> = u.iter().map(|&y| g.component(y).component(n)).collect();
                Matrix::from_blocks(field, &sizes(t, &u, n), &sizes(s, &u, n), parts.iter().enumerate().map(|(k, m)| (k, k, m)))
            })
        })
        .collect();
    SheafMap::new_unchecked(ts.clone(), tt.clone(), comps).expect("T(g) endpoints")
}

/// `η_F : F -> TF`, `a ↦ (r_{x→y} a)_{y ≥ x}`.
pub fn eta(f: &Arc<Sheaf>, tf: &Arc<Sheaf>) -> SheafMap {
    let field = f.field();
    let comps = f
        .poset()
        .elements()
        .map(|x| {
            let u = ups(f, x);
            ChainMap::from_fn_unchecked(f.stalk(x).clone(), tf.stalk(x).clone(), |n| {
                let parts: Vec<Matrix> = u.iter().map(|&y| f.restriction(x, y).component(n)).collect();
                Matrix::from_blocks(field, &sizes(f, &u, n), &[f.stalk(x).dim(n)], parts.iter().enumerate().map(|(k, m)| (k, 0, m)))
            })
        })
        .collect();
    SheafMap::new_unchecked(f.clone(), tf.clone(), comps).expect("η endpoints")
}

/// `ν_F : T²F -> TF`, keeping the factor `(y, z)` with `z = y` of
/// `(T²F)_x = ⊕_{y ≥ x} ⊕_{z ≥ y} F_z`.
pub fn nu(f: &Arc<Sheaf>, tf: &Arc<Sheaf>, ttf: &Arc<Sheaf>) -> SheafMap {
    let field = f.field();
    let poset = f.poset();
    let comps = poset
        .elements()
        .map(|x| {
            let u = ups(f, x);
            let pairs: Vec<(usize, usize)> = u.iter().flat_map(|&y| ups(f, y).into_iter().map(move |z| (y, z))).collect();
            ChainMap::from_fn_unchecked(ttf.stalk(x).clone(), tf.stalk(x).clone(), |n| {
                let cs: Vec<usize> = if pairs.is_empty() { vec![0] } else { pairs.iter().map(|&(_, z)| f.stalk(z).dim(n)).collect() };
                let ids: Vec<Matrix> = u.iter().map(|&y| Matrix::identity(field, f.stalk(y).dim(n))).collect();
                let blocks = u.iter().enumerate().map(|(r, &y)| (r, pairs.iter().position(|&pr| pr == (y, y)).unwrap(), &ids[r]));
                Matrix::from_blocks(field, &sizes(f, &u, n), &cs, blocks)
            })
        })
        .collect();
    SheafMap::new_unchecked(ttf.clone(), tf.clone(), comps).expect("ν endpoints")
}

/// The triple `(T, η, ν)` evaluated at one sheaf.
#[derive(Clone, Debug)]
pub struct GodementTriple {
    pub f: Arc<Sheaf>,
    pub tf: Arc<Sheaf>,
    pub ttf: Arc<Sheaf>,
    pub eta: SheafMap,
    pub nu: SheafMap,
}

/// `(TF, η_F, ν_F)` with the triple laws asserted on `F`.
pub fn godement_t(f: &Arc<Sheaf>) -> Result<GodementTriple, GodementError> {
    let tf = Arc::new(t_sheaf(f));
    let ttf = Arc::new(t_sheaf(&tf));
    let triple = GodementTriple { eta: eta(f, &tf), nu: nu(f, &tf, &ttf), f: f.clone(), tf, ttf };
    triple.check_laws()?;
    Ok(triple)
}

impl GodementTriple {
    /// `TF` is a sheaf, `η` and `ν` are sheaf maps, and
    /// `ν∘Tη = ν∘ηT = id`, `ν∘Tν = ν∘νT`.
    pub fn check_laws(&self) -> Result<(), GodementError> {
        let law = |s: &str| GodementError::TripleLaw(s.to_string());
        Sheaf::new(self.tf.poset().clone(), self.tf.stalks().to_vec(), self.tf.restrictions().clone())?;
        SheafMap::new(self.f.clone(), self.tf.clone(), self.eta.components().to_vec())?;
        SheafMap::new(self.ttf.clone(), self.tf.clone(), self.nu.components().to_vec())?;
        let id = SheafMap::identity(self.tf.clone());
        let t_eta = t_map(&self.eta, &self.tf, &self.ttf);
        if !self.nu.compose(&t_eta).same_components(&id) {
            return Err(law("ν∘Tη = id"));
        }
        let eta_t = eta(&self.tf, &self.ttf);
        if !self.nu.compose(&eta_t).same_components(&id) {
            return Err(law("ν∘ηT = id"));
        }
        let tttf = Arc::new(t_sheaf(&self.ttf));
        let t_nu = t_map(&self.nu, &tttf, &self.ttf);
        let nu_t = nu(&self.tf, &self.ttf, &tttf);
        if !self.nu.compose(&t_nu).same_components(&self.nu.compose(&nu_t)) {
            return Err(law("ν∘Tν = ν∘νT"));
        }
        Ok(())
    }
}

/// The resolution built literally: `G^p = T^{p+1}F`, `d^i = T^i η T^{p-i}`,
/// `s^j = T^j ν T^{p-j}`, as sheaves and sheaf maps.
#[derive(Clone, Debug)]
pub struct IteratedResolution {
    /// `powers[k] = T^k F`.
    pub powers: Vec<Arc<Sheaf>>,
    /// `cofaces[p][i] : G^{p-1} -> G^p`.
    pub cofaces: Vec<Vec<SheafMap>>,
    /// `codegeneracies[p][j] : G^{p+1} -> G^p`.
    pub codegeneracies: Vec<Vec<SheafMap>>,
    pub eta: SheafMap,
}

/// Apply `T` `times` times to a map `T^a F -> T^b F`.
fn t_iter(g: &SheafMap, powers: &[Arc<Sheaf>], a: usize, b: usize, times: usize) -> SheafMap {
    let mut m = g.clone();
    for k in 1..=times {
        m = t_map(&m, &powers[a + k], &powers[b + k]);
    }
    m
}

pub fn iterated_resolution(f: &Arc<Sheaf>, p_max: usize) -> IteratedResolution {
    let mut powers = vec![f.clone()];
    for k in 1..=p_max + 2 {
        let next = Arc::new(t_sheaf(&powers[k - 1]));
        powers.push(next);
    }
    // η_{T^k F} and ν_{T^k F}
    let etas: Vec<SheafMap> = (0..=p_max).map(|k| eta(&powers[k], &powers[k + 1])).collect();
    let nus: Vec<SheafMap> = (0..p_max).map(|k| nu(&powers[k], &powers[k + 1], &powers[k + 2])).collect();
    let mut cofaces = vec![Vec::new()];
    for p in 1..=p_max {
        cofaces.push((0..=p).map(|i| t_iter(&etas[p - i], &powers, p - i, p - i + 1, i)).collect());
    }
    let codegeneracies =
        (0..p_max).map(|p| (0..=p).map(|j| t_iter(&nus[p - j], &powers, p - j + 2, p - j + 1, j)).collect()).collect();
    IteratedResolution { eta: etas[0].clone(), powers, cofaces, codegeneracies }
}
