//! Margin accounting for finite windows.
//!
//! A module on a window is only a faithful stand-in for a module on the full
//! category when it vanishes on the cut edge of the window: otherwise its
//! extension by zero may violate relations that pass outside. Every
//! construction that grows supports checks its output with [`check_room`];
//! top-level computations first widen family windows with [`widen_for`] so
//! that the growth they will cause stays clear of the edge.

use std::sync::Arc;

use qshape_linalg::Field;

use crate::qmod::{QMod, QModMap};
use crate::shape::KCategory;
use crate::Error;

pub fn check_room<F: Field>(x: &QMod<F>) -> Result<(), Error> {
    let c = x.shape();
    match x.support().into_iter().find(|&q| c.is_boundary(q)) {
        Some(q) => Err(Error::WindowInsufficient {
            object: c.object_name(q).to_string(),
            needed: 1,
        }),
        None => Ok(()),
    }
}

/// A window on which every object within `reach` arrows of `support` is
/// off the edge. Family windows are widened (and cached); other shapes are
/// returned unchanged or rejected.
pub fn widen_for<F: Field>(
    shape: &Arc<KCategory<F>>,
    support: &[usize],
    reach: usize,
) -> Result<Arc<KCategory<F>>, Error> {
    if support.is_empty() {
        return Ok(shape.clone());
    }
    if let Some(meta) = shape.window_meta() {
        let cols: Vec<i64> = support
            .iter()
            .map(|&q| {
                meta.column_of(shape.object_name(q))
                    .expect("family object ids carry a column")
            })
            .collect();
        let (min, max) = (*cols.iter().min().unwrap(), *cols.iter().max().unwrap());
        let need = reach as i64 + 1;
        let left = (need - (min - meta.lo)).max(0);
        let right = (need - (meta.hi - max)).max(0);
        return shape.widened(left, right);
    }
    let dist = shape.distances_from(support);
    for b in shape.boundary_objects() {
        if dist[b].is_some_and(|d| d <= reach) {
            return Err(Error::WindowInsufficient {
                object: shape.object_name(b).to_string(),
                needed: reach + 1,
            });
        }
    }
    Ok(shape.clone())
}

/// Union of supports of several modules (object indices, ascending).
pub fn joint_support<F: Field>(mods: &[&QMod<F>]) -> Vec<usize> {
    let mut s: Vec<usize> = mods.iter().flat_map(|m| m.support()).collect();
    s.sort_unstable();
    s.dedup();
    s
}

/// Transport modules to a window with `reach` arrows of room around their
/// joint support.
pub fn with_room<F: Field>(mods: &[&QMod<F>], reach: usize) -> Result<Vec<QMod<F>>, Error> {
    let Some(first) = mods.first() else {
        return Ok(Vec::new());
    };
    let shape = widen_for(first.shape(), &joint_support(mods), reach)?;
    mods.iter().map(|m| m.transport(&shape)).collect()
}

/// As [`with_room`] for a map (source and target together).
pub fn map_with_room<F: Field>(phi: &QModMap<F>, reach: usize) -> Result<QModMap<F>, Error> {
    let shape = widen_for(
        phi.source().shape(),
        &joint_support(&[phi.source(), phi.target()]),
        reach,
    )?;
    phi.transport(&shape)
}

/// Objects whose column is within `reach` of the support's columns, or all
/// objects at directed distance ≤ `reach` forward or backward.
pub fn neighbourhood<F: Field>(
    shape: &KCategory<F>,
    support: &[usize],
    reach: usize,
) -> Vec<usize> {
    let fwd = shape.directed_distances_from(support, true);
    let bwd = shape.directed_distances_from(support, false);
    (0..shape.num_objects())
        .filter(|&q| fwd[q].is_some_and(|d| d <= reach) || bwd[q].is_some_and(|d| d <= reach))
        .collect()
}

/// A window of `a`'s family (and orientation) covering the columns of `b`
/// as well. Non-family shapes must already agree up to orientation.
pub fn union_window<F: Field>(
    a: &Arc<KCategory<F>>,
    b: &KCategory<F>,
) -> Result<Arc<KCategory<F>>, Error> {
    match (a.window_meta(), b.window_meta()) {
        (Some(ma), Some(mb)) if ma.family == mb.family => {
            a.widened((ma.lo - mb.lo).max(0), (mb.hi - ma.hi).max(0))
        }
        _ if **a == *b || a.is_opposite_of(b) => Ok(a.clone()),
        _ => Err(Error::ShapeMismatch(
            "modules live on unrelated shapes".into(),
        )),
    }
}
