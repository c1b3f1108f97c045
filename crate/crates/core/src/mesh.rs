//! One-dimensional partition of the bar into two-node elements.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Cross-sectional area along the bar, measured from the left end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AreaProfile {
    Uniform {
        area: f64,
    },
    /// Linear variation from `end_area` at both ends to `center_area` at midspan.
    LinearTaper {
        end_area: f64,
        center_area: f64,
    },
    /// `center_area` over a centered span of width `narrow_span`, `end_area` elsewhere.
    NarrowCenter {
        end_area: f64,
        center_area: f64,
        narrow_span: f64,
    },
}

impl AreaProfile {
    pub fn validate(&self, length: f64) -> Result<()> {
        match *self {
            AreaProfile::Uniform { area } => {
                if !(area > 0.0) {
                    return Err(Error::Config("area must be positive"));
                }
            }
            AreaProfile::LinearTaper {
                end_area,
                center_area,
            } => {
                if !(end_area > 0.0 && center_area > 0.0) {
                    return Err(Error::Config("taper areas must be positive"));
                }
            }
            AreaProfile::NarrowCenter {
                end_area,
                center_area,
                narrow_span,
            } => {
                if !(end_area > 0.0 && center_area > 0.0) {
                    return Err(Error::Config("narrow-center areas must be positive"));
                }
                if !(narrow_span > 0.0 && narrow_span < length) {
                    return Err(Error::Config("narrow span must lie inside the bar"));
                }
            }
        }
        Ok(())
    }

    /// Area at coordinate `x` on a bar of the given length.
    pub fn area_at(&self, x: f64, length: f64) -> f64 {
        let mid = 0.5 * length;
        match *self {
            AreaProfile::Uniform { area } => area,
            AreaProfile::LinearTaper {
                end_area,
                center_area,
            } => {
                let t = libm::fabs(x - mid) / mid;
                center_area + (end_area - center_area) * t
            }
            AreaProfile::NarrowCenter {
                end_area,
                center_area,
                narrow_span,
            } => {
                if libm::fabs(x - mid) < 0.5 * narrow_span {
                    center_area
                } else {
                    end_area
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Element {
    pub left_node: usize,
    pub right_node: usize,
    pub area: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interface {
    pub left_element: usize,
    pub right_element: usize,
    pub coordinate: f64,
}

/// Nodes, elements and interior interfaces of a bar. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1D {
    node_coords: Vec<f64>,
    elements: Vec<Element>,
    interfaces: Vec<Interface>,
}

impl Mesh1D {
    /// Equal-sized elements with the area sampled at each element centroid.
    pub fn uniform(length: f64, n_elements: usize, profile: AreaProfile) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::Config("bar length must be positive"));
        }
        if n_elements < 2 {
            return Err(Error::Config("at least two elements are required"));
        }
        profile.validate(length)?;
        let h = length / n_elements as f64;
        let mut coords: Vec<f64> = (0..=n_elements).map(|i| i as f64 * h).collect();
        // pin the last node so lengths sum to the bar length exactly
        coords[n_elements] = length;
        let areas: Vec<f64> = coords
            .windows(2)
            .map(|w| profile.area_at(0.5 * (w[0] + w[1]), length))
            .collect();
        Self::from_nodes(coords, &areas)
    }

    /// General mesh from strictly increasing node coordinates and one area per element.
    pub fn from_nodes(node_coords: Vec<f64>, areas: &[f64]) -> Result<Self> {
        if node_coords.len() < 3 {
            return Err(Error::Config("at least two elements are required"));
        }
        let n_el = node_coords.len() - 1;
        if areas.len() != n_el {
            return Err(Error::Size {
                what: "element areas",
                expected: n_el,
                got: areas.len(),
            });
        }
        if node_coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::Geometry("non-finite node coordinate"));
        }
        if node_coords.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Geometry(
                "node coordinates must be strictly increasing",
            ));
        }
        if areas.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
            return Err(Error::Geometry("element area must be positive"));
        }
        let elements = areas
            .iter()
            .enumerate()
            .map(|(e, &area)| Element {
                left_node: e,
                right_node: e + 1,
                area,
            })
            .collect();
        let interfaces = (0..n_el - 1)
            .map(|e| Interface {
                left_element: e,
                right_element: e + 1,
                coordinate: node_coords[e + 1],
            })
            .collect();
        Ok(Mesh1D {
            node_coords,
            elements,
            interfaces,
        })
    }

    pub fn node_coords(&self) -> &[f64] {
        &self.node_coords
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn interfaces(&self) -> &[Interface] {
        &self.interfaces
    }

    pub fn n_nodes(&self) -> usize {
        self.node_coords.len()
    }

    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn length(&self) -> f64 {
        self.node_coords[self.node_coords.len() - 1] - self.node_coords[0]
    }

    pub fn element_length(&self, e: usize) -> f64 {
        let el = &self.elements[e];
        self.node_coords[el.right_node] - self.node_coords[el.left_node]
    }

    pub fn element_centroid(&self, e: usize) -> f64 {
        let el = &self.elements[e];
        0.5 * (self.node_coords[el.right_node] + self.node_coords[el.left_node])
    }

    pub fn element_volume(&self, e: usize) -> f64 {
        self.elements[e].area * self.element_length(e)
    }

    pub fn centroids(&self) -> Vec<f64> {
        (0..self.n_elements())
            .map(|e| self.element_centroid(e))
            .collect()
    }

    /// Penalty length `h_e` on an interface: the mean of the two adjacent element lengths.
    pub fn interface_length_scale(&self, interface: usize) -> Result<f64> {
        let itf = self.interfaces.get(interface).ok_or(Error::Lookup {
            what: "interface",
            index: interface,
            len: self.interfaces.len(),
        })?;
        Ok(0.5 * (self.element_length(itf.left_element) + self.element_length(itf.right_element)))
    }

    /// Mean of the two adjacent element areas, used to weight interface terms.
    pub fn interface_area(&self, interface: usize) -> Result<f64> {
        let itf = self.interfaces.get(interface).ok_or(Error::Lookup {
            what: "interface",
            index: interface,
            len: self.interfaces.len(),
        })?;
        Ok(0.5 * (self.elements[itf.left_element].area + self.elements[itf.right_element].area))
    }
}
