//! Field state and the leapfrog update.

use rayon::prelude::*;

use super::cpml::{AxisProfile, PmlPoint};
use super::geometry::Plane;
use super::{Axis, Geometry, GridSpec};
use crate::materials::{ade_coefficients, Medium};
use crate::units::{ev_to_omega, Frequency, EPS0, MU0};
use crate::{Error, Result};

/// Per-medium E update coefficients for
/// `E⁺ = ca E + cb (∇×H - κ J - J_src)` and `J⁺ = α J + β (E⁺ + E)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeCoeffs {
    pub ca: f64,
    pub cb: f64,
    /// `cb / Δ`, applied to raw H differences.
    pub cbd: f64,
    pub alpha: f64,
    pub beta: f64,
    pub kappa: f64,
    pub eps_inf: f64,
    /// `ε0 ω_p²`, for the kinetic energy of `J`.
    pub eps0_wp2: f64,
}

impl EdgeCoeffs {
    pub fn new(m: &Medium, dt: f64, delta: f64) -> Result<Self> {
        m.validate()?;
        let eps_inf = m.eps_instantaneous();
        let (alpha, beta, kappa, eps0_wp2) = match m.drude() {
            Some(d) if m.is_dispersive() => {
                let c = ade_coefficients(d, dt)?;
                let wp = ev_to_omega(Frequency(d.plasma_ev))?;
                (c.alpha, c.beta, c.kappa, EPS0 * wp * wp)
            }
            _ => (0.0, 0.0, 0.0, 0.0),
        };
        let lhs = EPS0 * eps_inf / dt + 0.5 * beta;
        let cb = 1.0 / lhs;
        Ok(Self {
            ca: (EPS0 * eps_inf / dt - 0.5 * beta) * cb,
            cb,
            cbd: cb / delta,
            alpha,
            beta,
            kappa,
            eps_inf,
            eps0_wp2,
        })
    }

    fn dispersive(&self) -> bool {
        self.beta != 0.0
    }
}

#[derive(Debug, Clone, Default)]
struct Dispersive {
    /// Contiguous stretches of dispersive edges sharing one medium.
    runs: Vec<Run>,
    /// Polarization current, packed run after run.
    j: Vec<f64>,
    e_old: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
struct Run {
    start: usize,
    len: usize,
    mat: u8,
    /// Offset into the packed arrays.
    packed: usize,
}

#[derive(Debug, Clone)]
struct PmlPass {
    /// Updated field component and differentiated component.
    field: usize,
    source: usize,
    axis: usize,
    sign: f64,
    psi: Vec<f64>,
}

/// Complete state of one run: fields, currents, CPML memory.
#[derive(Debug, Clone)]
pub struct YeeState {
    dims: [usize; 3],
    planes: [Plane; 3],
    dt: f64,
    delta: f64,
    step: usize,
    e: [Vec<f64>; 3],
    h: [Vec<f64>; 3],
    ids: [Vec<u8>; 3],
    /// `Some(id)` when a component has a single medium everywhere.
    uniform: [Option<u8>; 3],
    coeffs: Vec<EdgeCoeffs>,
    disp: [Dispersive; 3],
    profiles: [AxisProfile; 3],
    pml_e: Vec<PmlPass>,
    pml_h: Vec<PmlPass>,
    source_component: usize,
    source_index: usize,
}

fn strides(d: [usize; 3]) -> [usize; 3] {
    [d[1] * d[2], d[2], 1]
}

impl YeeState {
    /// The CPML impedance is scaled by the background medium (id 0).
    pub fn new(geometry: &Geometry, grid: &GridSpec) -> Result<Self> {
        grid.validate()?;
        let dims = geometry.dims;
        let expect = |a: usize| grid.nodes() - geometry.offset[a];
        if (0..3).any(|a| dims[a] != expect(a)) {
            return Err(Error::InvalidGrid("geometry and grid disagree".into()));
        }
        let dt = grid.dt();
        let delta = grid.delta_nm * 1e-9;
        let coeffs = geometry
            .media
            .iter()
            .map(|m| EdgeCoeffs::new(m, dt, delta))
            .collect::<Result<Vec<_>>>()?;
        let size = geometry.size();
        let mut disp: [Dispersive; 3] = Default::default();
        let mut uniform = [None; 3];
        for c in 0..3 {
            let ids = &geometry.ids[c];
            let first = ids[0];
            if ids.iter().all(|&m| m == first) {
                uniform[c] = Some(first);
            }
            let d = &mut disp[c];
            let mut packed = 0;
            for (idx, &m) in ids.iter().enumerate() {
                if !coeffs[m as usize].dispersive() {
                    continue;
                }
                match d.runs.last_mut() {
                    Some(r) if r.mat == m && r.start + r.len == idx => r.len += 1,
                    _ => d.runs.push(Run {
                        start: idx,
                        len: 1,
                        mat: m,
                        packed,
                    }),
                }
                packed += 1;
            }
            d.j = vec![0.0; packed];
            d.e_old = vec![0.0; packed];
        }
        let eps_bg = geometry.media[0].eps_instantaneous();
        let profiles = [0, 1, 2].map(|a| {
            let lo = if geometry.planes[a] == Plane::None {
                grid.pml_cells
            } else {
                0
            };
            AxisProfile::new(dims[a] - 1, lo, grid.pml_cells, delta, dt, eps_bg)
        });
        let mut pml_e = Vec::new();
        let mut pml_h = Vec::new();
        let cross = |a: usize| size / dims[a];
        for c in 0..3 {
            let (a1, a2) = ((c + 1) % 3, (c + 2) % 3);
            for (axis, source, sign) in [(a1, a2, 1.0), (a2, a1, -1.0)] {
                pml_e.push(PmlPass {
                    field: c,
                    source,
                    axis,
                    sign,
                    psi: vec![0.0; profiles[axis].e.len() * cross(axis)],
                });
                pml_h.push(PmlPass {
                    field: c,
                    source,
                    axis,
                    sign,
                    psi: vec![0.0; profiles[axis].h.len() * cross(axis)],
                });
            }
        }
        Ok(Self {
            dims,
            planes: geometry.planes,
            dt,
            delta,
            step: 0,
            e: [vec![0.0; size], vec![0.0; size], vec![0.0; size]],
            h: [vec![0.0; size], vec![0.0; size], vec![0.0; size]],
            ids: geometry.ids.clone(),
            uniform,
            coeffs,
            disp,
            profiles,
            pml_e,
            pml_h,
            source_component: geometry.source_component.index(),
            source_index: geometry.source_index,
        })
    }

    /// Nodes per axis of the simulated region.
    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Completed steps; `E` is at `step·Δt`.
    pub fn steps(&self) -> usize {
        self.step
    }

    pub fn e(&self, c: Axis) -> &[f64] {
        &self.e[c.index()]
    }

    pub fn h(&self, c: Axis) -> &[f64] {
        &self.h[c.index()]
    }

    /// E on the source edge.
    pub fn source_field(&self) -> f64 {
        self.e[self.source_component][self.source_index]
    }

    /// Advances `E` from `nΔt` to `(n+1)Δt` with the source current
    /// `j_src` taken at `(n+½)Δt`.
    pub fn step(&mut self, j_src: f64) -> Result<()> {
        self.mirror(false);
        self.update_h();
        self.apply_pml_h();
        self.mirror(true);
        for c in 0..3 {
            let d = &mut self.disp[c];
            let e = &self.e[c];
            for r in &d.runs {
                d.e_old[r.packed..r.packed + r.len].copy_from_slice(&e[r.start..r.start + r.len]);
            }
        }
        self.update_e();
        self.apply_pml_e();
        let src_mat = self.ids[self.source_component][self.source_index] as usize;
        self.e[self.source_component][self.source_index] -= self.coeffs[src_mat].cb * j_src;
        self.update_currents();
        self.step += 1;

        if !self.source_field().is_finite() {
            return Err(Error::Unstable { step: self.step });
        }
        if self.step % 1024 == 0 && !self.all_finite() {
            return Err(Error::Unstable { step: self.step });
        }
        Ok(())
    }

    pub fn all_finite(&self) -> bool {
        self.e
            .iter()
            .chain(&self.h)
            .all(|f| f.iter().all(|v| v.is_finite()))
    }

    pub fn max_abs_e(&self) -> f64 {
        self.e
            .iter()
            .flat_map(|f| f.iter())
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Electromagnetic plus Drude kinetic energy of the simulated region,
    /// J (joules), image layers excluded. `E` and `H` are half a step
    /// apart, so this is the usual leapfrog estimate.
    pub fn energy(&self) -> f64 {
        let vol = self.delta.powi(3);
        let d = self.dims;
        let s = strides(d);
        let first = |a: usize| usize::from(self.planes[a] != Plane::None);
        let owned = |idx: usize| (0..2).all(|a| (idx / s[a]) % d[a] >= first(a));
        let mut w = 0.0;
        for c in 0..3 {
            let ids = &self.ids[c];
            for (idx, &v) in self.e[c].iter().enumerate() {
                if v != 0.0 && owned(idx) {
                    w += 0.5 * EPS0 * self.coeffs[ids[idx] as usize].eps_inf * v * v;
                }
            }
            for (idx, &v) in self.h[c].iter().enumerate() {
                if v != 0.0 && owned(idx) {
                    w += 0.5 * MU0 * v * v;
                }
            }
            let dc = &self.disp[c];
            for r in &dc.runs {
                let k = self.coeffs[r.mat as usize].eps0_wp2;
                for (t, j) in dc.j[r.packed..r.packed + r.len].iter().enumerate() {
                    if owned(r.start + t) {
                        w += 0.5 * j * j / k;
                    }
                }
            }
        }
        w * vol
    }

    /// Refills the image layers: tangential H across magnetic walls
    /// (`magnetic = true`) or tangential E across electric walls.
    fn mirror(&mut self, magnetic: bool) {
        let d = self.dims;
        let s = strides(d);
        let want = if magnetic { Plane::Node } else { Plane::Half };
        for a in 0..2 {
            if self.planes[a] != want {
                continue;
            }
            let fields = if magnetic { &mut self.h } else { &mut self.e };
            for (t, f) in fields.iter_mut().enumerate() {
                if t == a {
                    continue;
                }
                if a == 0 {
                    let (img, real) = f.split_at_mut(s[0]);
                    for (x, y) in img.iter_mut().zip(&real[..s[0]]) {
                        *x = -*y;
                    }
                } else {
                    for i in 0..d[0] {
                        let base = i * s[0];
                        for k in 0..d[2] {
                            f[base + k] = -f[base + s[1] + k];
                        }
                    }
                }
            }
        }
    }

    fn update_h(&mut self) {
        let d = self.dims;
        let s = strides(d);
        let ch = self.dt / (MU0 * self.delta);
        let [ex, ey, ez] = &self.e;
        let e = [ex.as_slice(), ey.as_slice(), ez.as_slice()];
        for (c, hc) in self.h.iter_mut().enumerate() {
            let (a1, a2) = ((c + 1) % 3, (c + 2) % 3);
            let (eb, ea) = (e[a2], e[a1]);
            let lo = |axis: usize| usize::from(axis == c);
            let (s1, s2) = (s[a1], s[a2]);
            hc.par_chunks_mut(s[0])
                .enumerate()
                .for_each(|(i, plane)| {
                    if i < lo(0) || i > d[0] - 2 {
                        return;
                    }
                    let k0 = lo(2);
                    let len = d[2] - 1 - k0;
                    for j in lo(1)..d[1] - 1 {
                        let g = i * s[0] + j * s[1] + k0;
                        let row = &mut plane[j * s[1] + k0..][..len];
                        let b0 = &eb[g..][..len];
                        let b1 = &eb[g + s1..][..len];
                        let a0 = &ea[g..][..len];
                        let a1 = &ea[g + s2..][..len];
                        for t in 0..len {
                            row[t] -= ch * ((b1[t] - b0[t]) - (a1[t] - a0[t]));
                        }
                    }
                });
        }
    }

    fn update_e(&mut self) {
        let d = self.dims;
        let s = strides(d);
        let [hx, hy, hz] = &self.h;
        let h = [hx.as_slice(), hy.as_slice(), hz.as_slice()];
        let coeffs = &self.coeffs;
        for (c, ec) in self.e.iter_mut().enumerate() {
            let (a1, a2) = ((c + 1) % 3, (c + 2) % 3);
            let (hb, ha) = (h[a2], h[a1]);
            let ids = &self.ids[c];
            let uniform = self.uniform[c].map(|m| coeffs[m as usize]);
            let lo = |axis: usize| usize::from(axis != c);
            let (s1, s2) = (s[a1], s[a2]);
            ec.par_chunks_mut(s[0])
                .enumerate()
                .for_each(|(i, plane)| {
                    if i < lo(0) || i > d[0] - 2 {
                        return;
                    }
                    let k0 = lo(2);
                    let len = d[2] - 1 - k0;
                    for j in lo(1)..d[1] - 1 {
                        let g = i * s[0] + j * s[1] + k0;
                        let row = &mut plane[j * s[1] + k0..][..len];
                        let b0 = &hb[g..][..len];
                        let b1 = &hb[g - s1..][..len];
                        let a0 = &ha[g..][..len];
                        let a1 = &ha[g - s2..][..len];
                        if let Some(co) = uniform {
                            for t in 0..len {
                                row[t] = co.ca * row[t]
                                    + co.cbd * ((b0[t] - b1[t]) - (a0[t] - a1[t]));
                            }
                        } else {
                            let m = &ids[g..][..len];
                            for t in 0..len {
                                let co = &coeffs[m[t] as usize];
                                row[t] = co.ca * row[t]
                                    + co.cbd * ((b0[t] - b1[t]) - (a0[t] - a1[t]));
                            }
                        }
                    }
                });
        }
    }

    fn update_currents(&mut self) {
        for c in 0..3 {
            let d = &mut self.disp[c];
            let e = &mut self.e[c];
            for r in &d.runs {
                let co = self.coeffs[r.mat as usize];
                let ck = co.cb * co.kappa;
                let ev = &mut e[r.start..r.start + r.len];
                let jv = &mut d.j[r.packed..r.packed + r.len];
                let old = &d.e_old[r.packed..r.packed + r.len];
                for t in 0..r.len {
                    let en = ev[t] - ck * jv[t];
                    ev[t] = en;
                    jv[t] = co.alpha * jv[t] + co.beta * (en + old[t]);
                }
            }
        }
    }

    fn apply_pml_e(&mut self) {
        let inv_d = 1.0 / self.delta;
        for pass in &mut self.pml_e {
            let sign = pass.sign;
            let table: Vec<f64> = self.coeffs.iter().map(|c| sign * c.cb).collect();
            let scale = match self.uniform[pass.field] {
                Some(m) => Scale::Const(table[m as usize]),
                None => Scale::PerMedium {
                    ids: &self.ids[pass.field],
                    table: &table,
                },
            };
            slab_pass(
                self.dims,
                Slab {
                    field: pass.field,
                    axis: pass.axis,
                    magnetic: false,
                },
                &self.profiles[pass.axis].e,
                &mut pass.psi,
                &mut self.e[pass.field],
                &self.h[pass.source],
                inv_d,
                scale,
            );
        }
    }

    fn apply_pml_h(&mut self) {
        let inv_d = 1.0 / self.delta;
        let dt_mu = self.dt / MU0;
        for pass in &mut self.pml_h {
            slab_pass(
                self.dims,
                Slab {
                    field: pass.field,
                    axis: pass.axis,
                    magnetic: true,
                },
                &self.profiles[pass.axis].h,
                &mut pass.psi,
                &mut self.h[pass.field],
                &self.e[pass.source],
                inv_d,
                Scale::Const(-pass.sign * dt_mu),
            );
        }
    }
}

#[derive(Clone, Copy)]
enum Scale<'a> {
    Const(f64),
    PerMedium { ids: &'a [u8], table: &'a [f64] },
}

impl Scale<'_> {
    #[inline(always)]
    fn at(&self, idx: usize) -> f64 {
        match *self {
            Scale::Const(c) => c,
            Scale::PerMedium { ids, table } => table[ids[idx] as usize],
        }
    }
}

#[derive(Clone, Copy)]
struct Slab {
    field: usize,
    axis: usize,
    magnetic: bool,
}

/// One CPML correction: wherever the coordinate of `field` along `axis`
/// lies in a slab, update `ψ = bψ + c ∂` and add `scale·(ψ + (1/κ - 1) ∂)`.
/// The derivative is a backward difference for E and forward for H.
///
/// `ψ` layout: `(slot, j, k)` for x slabs, `(slot, i, k)` for y slabs and
/// `(i, j, slot)` for z slabs, so the inner loop always runs along k.
#[allow(clippy::too_many_arguments)]
fn slab_pass(
    d: [usize; 3],
    slab: Slab,
    points: &[PmlPoint],
    psi: &mut [f64],
    field: &mut [f64],
    source: &[f64],
    inv_d: f64,
    scale: Scale,
) {
    let s = strides(d);
    let range = |ax: usize| -> std::ops::Range<usize> {
        if slab.magnetic == (ax == slab.field) {
            1..d[ax] - 1
        } else {
            0..d[ax] - 1
        }
    };
    let sa = s[slab.axis];
    let shift = if slab.magnetic { sa } else { 0 };
    let ns = points.len();
    if slab.axis == 2 {
        for i in range(0) {
            for j in range(1) {
                let row = i * s[0] + j * s[1];
                let psi_row = &mut psi[(i * d[1] + j) * ns..][..ns];
                for (ps, p) in psi_row.iter_mut().zip(points) {
                    let idx = row + p.pos;
                    let dv = (source[idx + shift] - source[idx + shift - sa]) * inv_d;
                    *ps = p.b * *ps + p.c * dv;
                    field[idx] += scale.at(idx) * (*ps + p.ik_m1 * dv);
                }
            }
        }
        return;
    }
    let other = 1 - slab.axis;
    let ks = range(2);
    let len = ks.len();
    for (slot, p) in points.iter().enumerate() {
        for o in range(other) {
            let (i, j) = if slab.axis == 0 { (p.pos, o) } else { (o, p.pos) };
            let g = i * s[0] + j * s[1] + ks.start;
            let psi_row = &mut psi[(slot * d[other] + o) * d[2] + ks.start..][..len];
            let f_row = &mut field[g..][..len];
            let a = &source[g + shift..][..len];
            let b = &source[g + shift - sa..][..len];
            match scale {
                Scale::Const(c) => {
                    for t in 0..len {
                        let dv = (a[t] - b[t]) * inv_d;
                        psi_row[t] = p.b * psi_row[t] + p.c * dv;
                        f_row[t] += c * (psi_row[t] + p.ik_m1 * dv);
                    }
                }
                Scale::PerMedium { ids, table } => {
                    let m = &ids[g..][..len];
                    for t in 0..len {
                        let dv = (a[t] - b[t]) * inv_d;
                        psi_row[t] = p.b * psi_row[t] + p.c * dv;
                        f_row[t] += table[m[t] as usize] * (psi_row[t] + p.ik_m1 * dv);
                    }
                }
            }
        }
    }
}
