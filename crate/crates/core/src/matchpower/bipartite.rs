/// Maximum bipartite matching by augmenting paths (Kuhn). `adj[l]` lists the
/// right neighbours of left vertex `l`; returns each left vertex's partner.
pub fn bipartite_matching(n_right: usize, adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    let mut right_owner: Vec<Option<usize>> = vec![None; n_right];
    let mut stamp = vec![0usize; n_right];
    for l in 0..adj.len() {
        augment(l, l + 1, adj, &mut right_owner, &mut stamp);
    }
    let mut left = vec![None; adj.len()];
    for (r, owner) in right_owner.iter().enumerate() {
        if let Some(l) = owner {
            left[*l] = Some(r);
        }
    }
    left
}

fn augment(
    l: usize,
    round: usize,
    adj: &[Vec<usize>],
    owner: &mut [Option<usize>],
    stamp: &mut [usize],
) -> bool {
    for &r in &adj[l] {
        if stamp[r] == round {
            continue;
        }
        stamp[r] = round;
        if owner[r].is_none_or(|o| augment(o, round, adj, owner, stamp)) {
            owner[r] = Some(l);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn needs_augmenting_path() {
        // greedy would give 0-0 and leave 1 unmatched
        let adj = vec![vec![0, 1], vec![0]];
        assert_eq!(bipartite_matching(2, &adj), vec![Some(1), Some(0)]);
        let adj = vec![vec![0], vec![0], vec![1, 2]];
        let m = bipartite_matching(3, &adj);
        assert_eq!(m.iter().flatten().count(), 2);
    }
}
