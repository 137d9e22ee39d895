//! Restriction of a `d̃`-dimensional field to the sublattice spanned by its
//! first `d` coordinates: `η_t(x) = ξ_t(x, 0, …, 0)`.

use crate::error::{Error, Result};
use crate::lattice::{SpaceTimeField, TorusGeometry};

/// Geometry of the kept sublattice.
pub fn projected_geometry(source: &TorusGeometry, keep: usize) -> Result<TorusGeometry> {
    if keep == 0 || keep >= source.dim() {
        return Err(Error::Dimension(format!(
            "cannot project a {}-dimensional field onto {keep} axes",
            source.dim()
        )));
    }
    TorusGeometry::new(keep, source.side(), source.horizon())
}

/// For every site of `target`, the index of the matching source site.
pub fn projection_map(source: &TorusGeometry, target: &TorusGeometry) -> Result<Vec<usize>> {
    if target.dim() >= source.dim() || target.side() != source.side() {
        return Err(Error::Dimension(format!(
            "target {}^{} is not a coordinate sublattice of {}^{}",
            target.side(),
            target.dim(),
            source.side(),
            source.dim()
        )));
    }
    Ok((0..target.num_sites())
        .map(|i| {
            let mut c = target.coords(i);
            c.resize(source.dim(), 0);
            source.index(&c)
        })
        .collect())
}

/// Projects one layer.
pub fn project_layer(layer: &[u8], map: &[usize]) -> Vec<u8> {
    map.iter().map(|&j| layer[j]).collect()
}

/// Projects every stored time of `field` onto its first `keep` axes.
pub fn project_axis(field: &SpaceTimeField, keep: usize) -> Result<SpaceTimeField> {
    let target = projected_geometry(field.geometry(), keep)?;
    let map = projection_map(field.geometry(), &target)?;
    let layers = (field.t_lo()..=field.t_hi())
        .map(|t| field.layer(t).map(|l| project_layer(l, &map)))
        .collect::<Result<Vec<_>>>()?;
    SpaceTimeField::from_layers(target, field.alphabet(), field.t_lo(), layers)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane_field() -> SpaceTimeField {
        let g = TorusGeometry::new(2, 5, 1).unwrap();
        let layer: Vec<u8> = (0..25).map(|i| ((i * 7 + 3) % 3 == 0) as u8).collect();
        SpaceTimeField::from_layers(g, 2, 0, vec![layer]).unwrap()
    }

    #[test]
    fn constant_field_projects_to_constant() {
        let g = TorusGeometry::new(2, 5, 2).unwrap();
        let f = SpaceTimeField::constant(g, 2, 0, 2, 1).unwrap();
        let p = project_axis(&f, 1).unwrap();
        assert_eq!(p.geometry().dim(), 1);
        assert!(p.layer(0).unwrap().iter().all(|&v| v == 1));
    }

    #[test]
    fn single_site_maps_to_axis_site() {
        let g = TorusGeometry::new(2, 5, 1).unwrap();
        let mut f = SpaceTimeField::constant(g, 2, 0, 1, 0).unwrap();
        f.set(&[2, 0], 0, 1).unwrap();
        f.set(&[2, 1], 0, 1).unwrap();
        let p = project_axis(&f, 1).unwrap();
        assert_eq!(p.get(&[2], 0).unwrap(), 1);
        assert_eq!(p.layer(0).unwrap().iter().filter(|&&v| v == 1).count(), 1);
    }

    #[test]
    fn commutes_with_kept_axis_shift() {
        let f = plane_field();
        for x in -2..=2 {
            let a = project_axis(&f.shift(&[x, 0], 0).unwrap(), 1).unwrap();
            let b = project_axis(&f, 1).unwrap().shift(&[x], 0).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn bad_axis_spec() {
        let f = plane_field();
        assert!(matches!(project_axis(&f, 2), Err(Error::Dimension(_))));
        assert!(matches!(project_axis(&f, 0), Err(Error::Dimension(_))));
    }
}
