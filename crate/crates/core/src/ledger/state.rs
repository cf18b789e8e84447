use std::collections::BTreeMap;

/// Latest committed value per key.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WorldState {
    values: BTreeMap<String, f64>,
}

impl WorldState {
    pub fn put(&mut self, key: String, value: f64) {
        self.values.insert(key, value);
    }

    pub fn query(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn latest_wins() {
        let mut s = WorldState::default();
        assert_eq!(s.query("reading/ue0"), None);
        s.put("reading/ue0".into(), 400.0);
        assert_eq!(s.query("reading/ue0"), Some(400.0));
        s.put("reading/ue0".into(), 410.0);
        assert_eq!(s.query("reading/ue0"), Some(410.0));
    }
}
