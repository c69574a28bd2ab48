//! The object pool and per-interaction contexts.

use std::collections::HashSet;

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::space::distance;

pub type ObjectId = usize;

/// A point in the unit feature cube, identified by its index in the pool.
#[derive(Debug, Clone, PartialEq)]
pub struct Object {
    pub id: ObjectId,
    pub features: Vec<f64>,
}

impl Object {
    pub fn new(id: ObjectId, features: Vec<f64>) -> Self {
        Object { id, features }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct World {
    objects: Vec<Object>,
    dims: usize,
}

impl World {
    /// Samples `n` objects with every coordinate i.i.d. uniform on [0, 1).
    pub fn generate<R: Rng + ?Sized>(n: usize, dims: usize, rng: &mut R) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("world size must be at least 1"));
        }
        if dims == 0 {
            return Err(Error::invalid("feature dimension must be at least 1"));
        }
        let objects = (0..n)
            .map(|id| Object::new(id, (0..dims).map(|_| rng.gen::<f64>()).collect()))
            .collect();
        Ok(World { objects, dims })
    }

    /// Builds a world from explicit feature vectors; ids follow input order.
    pub fn from_features(features: Vec<Vec<f64>>) -> Result<Self> {
        let dims = features.first().map(Vec::len).unwrap_or(0);
        if features.is_empty() || dims == 0 {
            return Err(Error::invalid(
                "world needs at least one object of dimension >= 1",
            ));
        }
        if features.iter().any(|f| f.len() != dims) {
            return Err(Error::invalid("all objects must share one dimension"));
        }
        let objects = features
            .into_iter()
            .enumerate()
            .map(|(id, f)| Object::new(id, f))
            .collect();
        Ok(World { objects, dims })
    }

    pub fn objects(&self) -> &[Object] {
        &self.objects
    }

    pub fn object(&self, id: ObjectId) -> Option<&Object> {
        self.objects.get(id)
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    /// Draws `m` distinct objects uniformly without replacement.
    pub fn sample_context<R: Rng + ?Sized>(&self, m: usize, rng: &mut R) -> Result<Context> {
        if m < 2 || m >= self.len() {
            return Err(Error::invalid(format!(
                "context size {m} must satisfy 2 <= m < {}",
                self.len()
            )));
        }
        let objects = index::sample(rng, self.len(), m)
            .into_iter()
            .map(|i| self.objects[i].clone())
            .collect();
        Ok(Context { objects })
    }
}

/// The objects present in one interaction. Members are distinct by id.
#[derive(Debug, Clone, PartialEq)]
pub struct Context {
    objects: Vec<Object>,
}

impl Context {
    pub fn new(objects: Vec<Object>) -> Result<Self> {
        if objects.is_empty() {
            return Err(Error::invalid("context must not be empty"));
        }
        let mut seen = HashSet::with_capacity(objects.len());
        if let Some(dup) = objects.iter().find(|o| !seen.insert(o.id)) {
            return Err(Error::invalid(format!(
                "object {} appears twice in context",
                dup.id
            )));
        }
        Ok(Context { objects })
    }

    pub fn objects(&self) -> &[Object] {
        &self.objects
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn contains(&self, id: ObjectId) -> bool {
        self.objects.iter().any(|o| o.id == id)
    }

    pub fn get(&self, id: ObjectId) -> Option<&Object> {
        self.objects.iter().find(|o| o.id == id)
    }

    pub fn ids(&self) -> Vec<ObjectId> {
        self.objects.iter().map(|o| o.id).collect()
    }

    /// Member nearest to `target`; ties go to the lowest object id.
    pub fn nearest_to(&self, target: &[f64]) -> &Object {
        self.objects
            .iter()
            .map(|o| (distance(&o.features, target), o))
            .min_by(|(da, a), (db, b)| da.total_cmp(db).then(a.id.cmp(&b.id)))
            .map(|(_, o)| o)
            .expect("contexts are non-empty")
    }

    /// Feature vectors of every member except `id`.
    pub fn others(&self, id: ObjectId) -> Vec<&[f64]> {
        self.objects
            .iter()
            .filter(|o| o.id != id)
            .map(|o| o.features.as_slice())
            .collect()
    }
}
