use std::ffi::{c_char, CStr, CString};
use std::ptr;

use pathrdf_ffi::*;

const GENES: &str = "dm:bcd rn:promotes dm:hb .
dm:bcd rn:inhibits dm:tll .
dm:bcd rn:promotes dm:Kr .
dm:tll rn:regulates dm:Kr .
dm:bcd rdf:type rn:gene .
dm:tll rdf:type rn:gene .";

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn text(p: *const c_char) -> Option<String> {
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned())
}

fn last_error() -> Option<String> {
    unsafe { text(pathrdf_last_error()) }
}

fn graph(src: &str) -> *mut PathrdfGraph {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { pathrdf_graph_parse(c(src).as_ptr(), &mut g) }, PATHRDF_OK);
    g
}

#[test]
fn parse_query_and_read_cells() {
    let g = graph(GENES);
    assert_eq!(unsafe { pathrdf_graph_len(g) }, 6);
    let q = c("SELECT ?x ?y ?z WHERE { ?x rn:inhibits ?y . ?x rn:promotes ?z . ?y rn:regulates ?z }");
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { pathrdf_query(g, q.as_ptr(), ptr::null(), &mut r) }, PATHRDF_OK);
    assert!(last_error().is_none());
    unsafe {
        assert_eq!(pathrdf_result_rows(r), 1);
        assert_eq!(pathrdf_result_cols(r), 3);
        assert_eq!(text(pathrdf_result_var(r, 1)).as_deref(), Some("y"));
        assert!(pathrdf_result_var(r, 3).is_null());
        assert_eq!(text(pathrdf_result_cell(r, 0, 2)).as_deref(), Some("dm:Kr"));
        assert!(pathrdf_result_cell(r, 1, 0).is_null());
        let tsv = pathrdf_result_to_tsv(r);
        assert_eq!(text(tsv).unwrap(), "?x\t?y\t?z\ndm:bcd\tdm:tll\tdm:Kr\n");
        pathrdf_string_free(tsv);
        pathrdf_result_free(r);
        pathrdf_graph_free(g);
    }
}

#[test]
fn unbound_cells_are_null() {
    let g = graph(GENES);
    let q = c("SELECT ?x ?y WHERE { ?x rdf:type rn:gene OPTIONAL { ?x rn:promotes ?y } }");
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { pathrdf_query(g, q.as_ptr(), c("simple").as_ptr(), &mut r) }, PATHRDF_OK);
    unsafe {
        assert_eq!(pathrdf_result_rows(r), 3);
        let rows: Vec<(Option<String>, Option<String>)> = (0..3)
            .map(|i| (text(pathrdf_result_cell(r, i, 0)), text(pathrdf_result_cell(r, i, 1))))
            .collect();
        assert!(rows.contains(&(Some("dm:tll".into()), None)), "{rows:?}");
        pathrdf_result_free(r);
        pathrdf_graph_free(g);
    }
}

#[test]
fn rdfs_semantics_and_closure() {
    let g = graph(&format!("{GENES}\nrn:inhibits sp rn:regulates .\nrn:regulates dom rn:gene ."));
    let q = c("SELECT ?x ?y WHERE { ?x rn:regulates ?y }");
    for mode in ["rdfs-closure", "rdfs-psparql", "rdfs-nsparql", "rdfs-cpsparql"] {
        let mut r = ptr::null_mut();
        assert_eq!(unsafe { pathrdf_query(g, q.as_ptr(), c(mode).as_ptr(), &mut r) }, PATHRDF_OK, "{mode}");
        assert_eq!(unsafe { pathrdf_result_rows(r) }, 2, "{mode}");
        unsafe { pathrdf_result_free(r) };
    }
    let mut closed = ptr::null_mut();
    assert_eq!(unsafe { pathrdf_graph_closure(g, false, false, &mut closed) }, PATHRDF_OK);
    unsafe {
        assert_eq!(pathrdf_graph_len(closed), 8 + 1);
        let nt = pathrdf_graph_to_ntriples(closed);
        assert!(text(nt).unwrap().lines().any(|l| l == "dm:bcd rn:regulates dm:tll ."));
        pathrdf_string_free(nt);
        pathrdf_graph_free(closed);
        pathrdf_graph_free(g);
    }
}

#[test]
fn rewrite_to_nested_paths() {
    let mut out = ptr::null_mut();
    let q = c("SELECT ?x WHERE { ?x rn:promotes ?y }");
    assert_eq!(unsafe { pathrdf_rewrite(q.as_ptr(), c("nsparql-phi").as_ptr(), &mut out) }, PATHRDF_OK);
    let s = unsafe { text(out) }.unwrap();
    assert!(s.contains("?x next::[(next::sp)*/self::rn:promotes] ?y"), "{s}");
    unsafe { pathrdf_string_free(out) };
}

#[test]
fn error_codes() {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { pathrdf_graph_parse(c("ex:a ex:p .").as_ptr(), &mut g) }, PATHRDF_ERR_SYNTAX);
    assert!(g.is_null());
    assert!(last_error().unwrap().contains("syntax error"));
    assert_eq!(unsafe { pathrdf_graph_parse(ptr::null(), &mut g) }, PATHRDF_ERR_NULL);
    let bad = [0xffu8, 0];
    assert_eq!(unsafe { pathrdf_graph_parse(bad.as_ptr().cast(), &mut g) }, PATHRDF_ERR_UTF8);
    assert_eq!(unsafe { pathrdf_graph_parse(c("").as_ptr(), ptr::null_mut()) }, PATHRDF_ERR_NULL);

    let g = graph(GENES);
    let mut r = ptr::null_mut();
    let path = c("SELECT ?x WHERE { ?x (next::rn:promotes)+ ?y }");
    assert_eq!(unsafe { pathrdf_query(g, path.as_ptr(), c("rdfs-closure").as_ptr(), &mut r) }, PATHRDF_ERR_DIALECT);
    let q = c("SELECT ?x WHERE { ?x rn:promotes ?y }");
    assert_eq!(unsafe { pathrdf_query(g, q.as_ptr(), c("nope").as_ptr(), &mut r) }, PATHRDF_ERR_CONFIG);
    assert_eq!(unsafe { pathrdf_query(ptr::null(), q.as_ptr(), ptr::null(), &mut r) }, PATHRDF_ERR_NULL);
    assert!(r.is_null());

    let mut out = ptr::null_mut();
    let var_pred = c("SELECT * WHERE { ?s ?p ?o }");
    assert_eq!(unsafe { pathrdf_rewrite(var_pred.as_ptr(), c("nsparql-phi").as_ptr(), &mut out) }, PATHRDF_ERR_DIALECT);
    assert!(last_error().unwrap().contains("?p"));
    unsafe { pathrdf_graph_free(g) };
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        pathrdf_graph_free(ptr::null_mut());
        pathrdf_result_free(ptr::null_mut());
        pathrdf_string_free(ptr::null_mut());
        assert_eq!(pathrdf_graph_len(ptr::null()), 0);
        assert_eq!(pathrdf_result_rows(ptr::null()), 0);
        assert!(pathrdf_result_cell(ptr::null(), 0, 0).is_null());
        assert!(pathrdf_graph_to_ntriples(ptr::null()).is_null());
        assert!(pathrdf_result_to_tsv(ptr::null()).is_null());
    }
}
