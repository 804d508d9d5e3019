use ugl::parallel;
use ugl_core::necessary::Completions;
use ugl_core::shapes::{family_graph, minimal_obstructions, FamilyId, ShapeId};

#[test]
fn threaded_obstructions_match_sequential() {
    for shape in [ShapeId::TreeComparability, ShapeId::IntervalIntersection] {
        let seq = minimal_obstructions(shape, 6).unwrap();
        for jobs in [1, 2, 5] {
            assert_eq!(parallel::minimal_obstructions(shape, 6, jobs).unwrap(), seq);
        }
    }
}

#[test]
fn threaded_completions_match_sequential() {
    for id in [FamilyId::C4, FamilyId::FamIII(6), FamilyId::FamIV(2), FamilyId::FamV(1), FamilyId::FamII] {
        let h = family_graph(id).unwrap();
        let seq = Completions::compute(id.shape(), &h).unwrap();
        for jobs in [2, 3, 8] {
            let par = parallel::completions(id.shape(), &h, jobs).unwrap();
            assert_eq!(par.minimal, seq.minimal, "{id} jobs={jobs}");
            assert_eq!(par.non_edges, seq.non_edges);
        }
    }
}
