//! Zip data of Coxeter type: (W, W_µ, ^µW, ψ), the partial order ⪯ on ^µW,
//! the groups E_w and framed-orbit equality.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::weyl::{self, Family, WeylElement, WeylGroupSpec};

/// ψ(x) = twist · π(x) · twist⁻¹, where π is the automorphism of W induced by
/// a permutation of the simple reflections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiSpec {
    /// `diagram_perm[i-1] = π(i)`.
    pub diagram_perm: Vec<usize>,
    pub twist: WeylElement,
}

impl PsiSpec {
    pub fn identity(group: WeylGroupSpec) -> Self {
        PsiSpec { diagram_perm: (1..=group.num_simple()).collect(), twist: group.identity() }
    }

    /// The outer automorphism of D_m exchanging s_{m-1} and s_m.
    pub fn diagram_swap(group: WeylGroupSpec) -> Result<Self> {
        if group.family() != Family::D {
            return invalid("the diagram swap exists only in type D");
        }
        let m = group.rank();
        let mut perm: Vec<usize> = (1..=m).collect();
        perm.swap(m - 2, m - 1);
        Ok(PsiSpec { diagram_perm: perm, twist: group.identity() })
    }

    /// Conjugation by `twist`.
    pub fn inner(twist: WeylElement) -> Self {
        let group = twist.group();
        PsiSpec { diagram_perm: (1..=group.num_simple()).collect(), twist }
    }
}

/// Which ψ an orthogonal datum uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PsiKind {
    /// Split Frobenius, n odd or even.
    Identity,
    /// Nonsplit even case: s_{m-1} <-> s_m.
    DiagramSwap,
    /// Twisted odd case: Int(s_m).
    InnerSm,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StratumLabel {
    pub rep: WeylElement,
    pub dim: usize,
}

impl StratumLabel {
    pub fn new(rep: WeylElement) -> Self {
        let dim = rep.length();
        StratumLabel { rep, dim }
    }

    /// w_i / w_{m-1}^† for orthogonal groups, δ_a for type A, cycles otherwise.
    pub fn name(&self) -> String {
        if self.rep.group().family() == Family::A {
            if let Ok(a) = weyl::type_a_eo_index(&self.rep) {
                return format!("δ_{a}");
            }
        }
        weyl::mu_w_name(&self.rep).unwrap_or_else(|| self.rep.cycles())
    }
}

impl fmt::Display for StratumLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A zip datum with the whole group tabulated.
#[derive(Clone, Debug)]
pub struct CoxeterZipDatum {
    group: WeylGroupSpec,
    levi_gens: Vec<usize>,
    psi: PsiSpec,
    elems: Vec<WeylElement>,
    index: HashMap<Vec<u8>, usize>,
    inv: Vec<usize>,
    psi_tab: Vec<usize>,
    wmu: Vec<usize>,
    in_wmu: Vec<bool>,
    reps: Vec<usize>,
}

fn coxeter_order(a: &WeylElement, b: &WeylElement) -> usize {
    let ab = a.compose(b);
    let mut x = ab.clone();
    let mut k = 1;
    while !x.is_identity() {
        x = x.compose(&ab);
        k += 1;
    }
    k
}

impl CoxeterZipDatum {
    pub fn new(group: WeylGroupSpec, levi_gens: &[usize], psi: PsiSpec) -> Result<Self> {
        let k = group.num_simple();
        if let Some(&bad) = levi_gens.iter().find(|&&i| i == 0 || i > k) {
            return Err(Error::IndexOutOfRange { index: bad, max: k });
        }
        if psi.twist.group() != group {
            return Err(Error::GroupMismatch);
        }
        let mut sorted = psi.diagram_perm.clone();
        sorted.sort_unstable();
        if sorted != (1..=k).collect::<Vec<_>>() {
            return invalid("diagram permutation is not a permutation of the simple reflections");
        }
        let gens = group.simple_reflections();
        for i in 0..k {
            for j in 0..k {
                let (pi, pj) = (psi.diagram_perm[i] - 1, psi.diagram_perm[j] - 1);
                if coxeter_order(&gens[i], &gens[j]) != coxeter_order(&gens[pi], &gens[pj]) {
                    return invalid("diagram permutation does not preserve the Coxeter matrix");
                }
            }
        }

        let elems = group.enumerate();
        let index: HashMap<Vec<u8>, usize> =
            elems.iter().enumerate().map(|(i, w)| (w.one_line().to_vec(), i)).collect();
        let idx = |w: &WeylElement| index[w.one_line()];
        let inv: Vec<usize> = elems.iter().map(|w| idx(&w.inverse())).collect();

        // π on the whole group by BFS: π(x s_i) = π(x) s_{π(i)}
        let mut pi: Vec<Option<usize>> = vec![None; elems.len()];
        let id = idx(&group.identity());
        pi[id] = Some(id);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            let px = &elems[pi[x].unwrap()];
            for i in 1..=k {
                let y = idx(&elems[x].compose(&gens[i - 1]));
                if pi[y].is_none() {
                    pi[y] = Some(idx(&px.compose(&gens[psi.diagram_perm[i - 1] - 1])));
                    queue.push_back(y);
                }
            }
        }
        let pi: Vec<usize> = pi.into_iter().map(|v| v.expect("W is generated by simple reflections")).collect();
        for x in 0..elems.len() {
            for i in 1..=k {
                let y = idx(&elems[x].compose(&gens[i - 1]));
                let expect = idx(&elems[pi[x]].compose(&gens[psi.diagram_perm[i - 1] - 1]));
                if pi[y] != expect {
                    return Err(Error::Consistency("diagram permutation does not extend to W".into()));
                }
            }
        }
        let tw = &psi.twist;
        let tw_inv = tw.inverse();
        let psi_tab: Vec<usize> =
            pi.iter().map(|&x| idx(&tw.compose(&elems[x]).compose(&tw_inv))).collect();

        // W_µ by closure under the Levi generators
        let mut in_wmu = vec![false; elems.len()];
        in_wmu[id] = true;
        let mut wmu = vec![id];
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            for &i in levi_gens {
                let y = idx(&elems[x].compose(&gens[i - 1]));
                if !in_wmu[y] {
                    in_wmu[y] = true;
                    wmu.push(y);
                    frontier.push(y);
                }
            }
        }
        wmu.sort_unstable();
        if wmu.iter().any(|&x| !in_wmu[psi_tab[x]]) {
            return invalid("ψ does not preserve W_µ");
        }

        let reps: Vec<usize> =
            weyl::min_coset_reps(group, levi_gens)?.iter().map(idx).collect();

        Ok(CoxeterZipDatum {
            group,
            levi_gens: levi_gens.to_vec(),
            psi,
            elems,
            index,
            inv,
            psi_tab,
            wmu,
            in_wmu,
            reps,
        })
    }

    /// The datum for SO(n,2) with W_µ = ⟨s_i : i >= 2, s_i(1) = 1⟩.
    pub fn orthogonal(n: usize, kind: PsiKind) -> Result<Self> {
        let group = WeylGroupSpec::orthogonal(n)?;
        let psi = match kind {
            PsiKind::Identity => PsiSpec::identity(group),
            PsiKind::DiagramSwap => PsiSpec::diagram_swap(group)?,
            PsiKind::InnerSm => {
                if group.family() != Family::B {
                    return invalid("Int(s_m) is used only for n odd");
                }
                PsiSpec::inner(group.simple_reflection(group.rank())?)
            }
        };
        Self::new(group, &group.levi_gens(), psi)
    }

    pub fn group(&self) -> WeylGroupSpec {
        self.group
    }

    pub fn levi_gens(&self) -> &[usize] {
        &self.levi_gens
    }

    pub fn psi_spec(&self) -> &PsiSpec {
        &self.psi
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elems
    }

    fn idx(&self, w: &WeylElement) -> Result<usize> {
        if w.group() != self.group {
            return Err(Error::GroupMismatch);
        }
        Ok(self.index[w.one_line()])
    }

    #[inline]
    fn mul_idx(&self, a: usize, b: usize) -> usize {
        self.index[self.elems[a].compose(&self.elems[b]).one_line()]
    }

    pub fn psi(&self, w: &WeylElement) -> Result<WeylElement> {
        Ok(self.elems[self.psi_tab[self.idx(w)?]].clone())
    }

    pub fn w_mu(&self) -> Vec<WeylElement> {
        self.wmu.iter().map(|&i| self.elems[i].clone()).collect()
    }

    pub fn is_in_w_mu(&self, w: &WeylElement) -> Result<bool> {
        Ok(self.in_wmu[self.idx(w)?])
    }

    /// ^µW as stratum labels, sorted by (dimension, one-line notation).
    pub fn mu_w(&self) -> Vec<StratumLabel> {
        self.reps.iter().map(|&i| StratumLabel::new(self.elems[i].clone())).collect()
    }

    pub fn is_mu_w(&self, w: &WeylElement) -> Result<bool> {
        let i = self.idx(w)?;
        Ok(self.reps.contains(&i))
    }

    /// w ⪯ w' iff v⁻¹ w ψ(v) <= w' in the Bruhat order for some v ∈ W_µ.
    pub fn preceq(&self, w: &StratumLabel, w2: &StratumLabel) -> Result<bool> {
        let a = self.idx(&w.rep)?;
        let b = self.idx(&w2.rep)?;
        if !self.reps.contains(&a) || !self.reps.contains(&b) {
            return invalid("⪯ is defined on ^µW only");
        }
        for &v in &self.wmu {
            let x = self.mul_idx(self.mul_idx(self.inv[v], a), self.psi_tab[v]);
            if self.elems[x].bruhat_leq(&self.elems[b])? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// θ(x) = ψ(w x w⁻¹).
    fn theta(&self, w: usize, x: usize) -> usize {
        self.psi_tab[self.mul_idx(self.mul_idx(w, x), self.inv[w])]
    }

    /// E_w: the largest subgroup H of wW_µw⁻¹ with ψ(wHw⁻¹) = H.
    ///
    /// θ(x) = ψ(wxw⁻¹) permutes W, so the sets θ^k(K), K = wW_µw⁻¹, are
    /// periodic in k and E_w is their intersection over one period.
    fn ew_indices(&self, w: usize) -> Vec<usize> {
        let winv = self.inv[w];
        let k: BTreeSet<usize> =
            self.wmu.iter().map(|&x| self.mul_idx(self.mul_idx(w, x), winv)).collect();
        let mut out = k.clone();
        let mut img = k.clone();
        loop {
            img = img.iter().map(|&x| self.theta(w, x)).collect();
            if img == k {
                return out.into_iter().collect();
            }
            out.retain(|x| img.contains(x));
        }
    }

    pub fn compute_ew(&self, w: &WeylElement) -> Result<Vec<WeylElement>> {
        let i = self.idx(w)?;
        Ok(self.ew_indices(i).into_iter().map(|x| self.elems[x].clone()).collect())
    }

    /// {v⁻¹ w e ψ(v) : v ∈ W_µ, e ∈ E_w} as element indices.
    fn class_indices(&self, w: usize) -> BTreeSet<usize> {
        let ew = self.ew_indices(w);
        let mut out = BTreeSet::new();
        for &v in &self.wmu {
            let left = self.mul_idx(self.inv[v], w);
            for &e in &ew {
                out.insert(self.mul_idx(self.mul_idx(left, e), self.psi_tab[v]));
            }
        }
        out
    }

    pub fn orbit_class(&self, w: &WeylElement) -> Result<Vec<WeylElement>> {
        let i = self.idx(w)?;
        Ok(self.class_indices(i).into_iter().map(|x| self.elems[x].clone()).collect())
    }

    /// Whether w' = v⁻¹ w v' ψ(v) for some v ∈ W_µ and v' ∈ E_w.
    pub fn orbit_equal(&self, w: &WeylElement, w2: &WeylElement) -> Result<bool> {
        let a = self.idx(w)?;
        let b = self.idx(w2)?;
        Ok(self.class_indices(a).contains(&b))
    }

    /// The unique element of ^µW in the framed orbit of `w`.
    pub fn canonical_label(&self, w: &WeylElement) -> Result<StratumLabel> {
        let a = self.idx(w)?;
        let class = self.class_indices(a);
        let hits: Vec<usize> = self.reps.iter().copied().filter(|r| class.contains(r)).collect();
        match hits.as_slice() {
            [r] => Ok(StratumLabel::new(self.elems[*r].clone())),
            [] => Err(Error::Consistency(format!("orbit of {w} meets no element of ^µW"))),
            _ => Err(Error::Consistency(format!("orbit of {w} meets {} elements of ^µW", hits.len()))),
        }
    }

    /// The full ⪯ relation on ^µW, as a matrix indexed like [`Self::mu_w`].
    pub fn order_matrix(&self) -> Result<Vec<Vec<bool>>> {
        let labels = self.mu_w();
        labels.iter().map(|a| labels.iter().map(|b| self.preceq(a, b)).collect()).collect()
    }

    /// Covering relations (lower, upper) of ⪯.
    pub fn hasse_diagram(&self) -> Result<Vec<(StratumLabel, StratumLabel)>> {
        let labels = self.mu_w();
        let leq = self.order_matrix()?;
        let n = labels.len();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !leq[a][b] {
                    continue;
                }
                let covered = (0..n).any(|c| c != a && c != b && leq[a][c] && leq[c][b]);
                if !covered {
                    edges.push((labels[a].clone(), labels[b].clone()));
                }
            }
        }
        Ok(edges)
    }
}
