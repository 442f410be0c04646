use std::collections::HashMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{Arrow, FiniteMeasuredGroupoid, GroupoidError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitDoc {
    pub id: usize,
    /// Exact rational such as `"1/3"`.
    pub mass: String,
    pub unit_arrow: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowDoc {
    pub id: usize,
    pub source: usize,
    pub range: usize,
    pub inverse: usize,
    #[serde(default)]
    pub label: String,
}

/// Serialized groupoid. `products` lists `[g, h, g·h]` for every composable pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidDoc {
    pub units: Vec<UnitDoc>,
    pub arrows: Vec<ArrowDoc>,
    pub products: Vec<[usize; 3]>,
}

impl GroupoidDoc {
    pub fn from_groupoid(g: &FiniteMeasuredGroupoid) -> Self {
        GroupoidDoc {
            units: (0..g.n_units())
                .map(|x| UnitDoc {
                    id: x,
                    mass: g.mass(x).to_string(),
                    unit_arrow: g.unit(x),
                })
                .collect(),
            arrows: g
                .arrows()
                .iter()
                .enumerate()
                .map(|(id, a)| ArrowDoc {
                    id,
                    source: a.source,
                    range: a.range,
                    inverse: a.inverse,
                    label: a.label.clone(),
                })
                .collect(),
            products: g.product_table().into_iter().map(|(a, b, c)| [a, b, c]).collect(),
        }
    }

    /// Builds the groupoid without validating the axioms.
    pub fn to_groupoid(&self) -> Result<FiniteMeasuredGroupoid, GroupoidError> {
        let bad = |m: String| GroupoidError::InvalidInput(m);
        for (i, u) in self.units.iter().enumerate() {
            if u.id != i {
                return Err(bad(format!("unit ids must be 0..n in order (found {} at {i})", u.id)));
            }
        }
        for (i, a) in self.arrows.iter().enumerate() {
            if a.id != i {
                return Err(bad(format!("arrow ids must be 0..n in order (found {} at {i})", a.id)));
            }
        }
        let masses = self
            .units
            .iter()
            .map(|u| {
                u.mass
                    .trim()
                    .parse::<BigRational>()
                    .map_err(|_| bad(format!("bad mass {:?} at unit {}", u.mass, u.id)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow {
                source: a.source,
                range: a.range,
                inverse: a.inverse,
                label: a.label.clone(),
            })
            .collect();
        let mut table = HashMap::new();
        for &[g, h, c] in &self.products {
            if table.insert((g, h), c).is_some() {
                return Err(bad(format!("product ({g}, {h}) listed twice")));
            }
        }
        let units = self.units.iter().map(|u| u.unit_arrow).collect();
        FiniteMeasuredGroupoid::from_table(masses, arrows, units, table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::uniform_masses;

    #[test]
    fn roundtrip_and_broken_table() {
        let g = FiniteMeasuredGroupoid::from_group_action(uniform_masses(3), &[("r".into(), vec![1, 2, 0])], 8).unwrap();
        let doc = GroupoidDoc::from_groupoid(&g);
        let text = serde_json::to_string(&doc).unwrap();
        let back: GroupoidDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
        let h = back.to_groupoid().unwrap();
        h.validate().unwrap();
        assert_eq!(GroupoidDoc::from_groupoid(&h), doc);

        let mut broken = doc.clone();
        let i = broken.products.iter().position(|p| p[0] != p[2] && p[1] != p[2]).unwrap();
        broken.products[i][2] = broken.products[i][0];
        assert!(broken.to_groupoid().unwrap().validate().is_err());
    }
}
