use crate::env::Arm;
use crate::rng::Stream;

use super::ucb::FiniteUcb;
use super::Learner;

/// Cells per axis for horizon `t`: ⌈(L²·t / ln max(t, 3))^{1/(d+2)}⌉, at least 1.
pub fn grid_size(lipschitz: f64, t: u64, d: usize) -> usize {
    let t = t as f64;
    let raw = (lipschitz * lipschitz * t / t.max(3.0).ln()).powf(1.0 / (d as f64 + 2.0));
    (raw.ceil() as usize).max(1)
}

/// UCB on the centers of a uniform m^d grid over [0,1]^d.
#[derive(Debug, Clone)]
pub struct UniformUcb {
    centers: Vec<Vec<f64>>,
    ucb: FiniteUcb,
    last: Option<usize>,
}

impl UniformUcb {
    pub fn new(per_axis: usize, d: usize) -> Self {
        let total = per_axis.pow(d as u32);
        let mut centers = Vec::with_capacity(total);
        for flat in 0..total {
            let mut rest = flat;
            let mut c = Vec::with_capacity(d);
            for _ in 0..d {
                c.push(((rest % per_axis) as f64 + 0.5) / per_axis as f64);
                rest /= per_axis;
            }
            centers.push(c);
        }
        UniformUcb {
            centers,
            ucb: FiniteUcb::new(total),
            last: None,
        }
    }

    pub fn for_horizon(lipschitz: f64, t: u64, d: usize) -> Self {
        Self::new(grid_size(lipschitz, t, d), d)
    }

    pub fn num_cells(&self) -> usize {
        self.centers.len()
    }

    pub fn centers(&self) -> &[Vec<f64>] {
        &self.centers
    }
}

impl Learner for UniformUcb {
    fn select(&mut self, _rng: &mut Stream) -> Arm {
        let k = self.ucb.choose();
        self.last = Some(k);
        Arm::Point(self.centers[k].clone())
    }

    fn observe(&mut self, _arm: &Arm, reward: f64) {
        let k = self.last.take().expect("observe follows select");
        self.ucb.update(k, reward);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_size_formula() {
        // (100·5000 / ln 5000)^{1/4} = 15.57...
        assert_eq!(grid_size(10.0, 5000, 2), 16);
        // t below 3 uses ln 3
        let want = (4.0 * 2.0 / 3f64.ln()).powf(1.0 / 3.0).ceil() as usize;
        assert_eq!(grid_size(2.0, 2, 1), want);
    }

    #[test]
    fn centers_tile_the_unit_square() {
        let u = UniformUcb::new(4, 2);
        assert_eq!(u.num_cells(), 16);
        assert_eq!(u.centers()[0], vec![0.125, 0.125]);
        assert_eq!(u.centers()[5], vec![0.375, 0.375]);
        assert!(u.centers().iter().all(|c| c.iter().all(|&x| x > 0.0 && x < 1.0)));
    }
}
