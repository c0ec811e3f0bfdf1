/** Shapes of the storyboard JSON document the viewer consumes. */

export interface PairDoc {
  source: string;
  target: string;
  origin: string;
  via: string;
}

export interface ComponentDoc {
  node_id: string;
  node_type: string;
  clickable: boolean;
  bounds: [number, number, number, number];
  label: string;
}

export interface PageDoc {
  activity: string;
  width: number;
  height: number;
  raster: number[];
  layout_dump: unknown;
  components: ComponentDoc[];
}

export interface OutcomeDoc {
  status: string;
  cause: string | null;
}

export interface MetricsDoc {
  transition_pairs: number;
  activity_coverage: number;
  launch_ratio: number | null;
  similarity: Record<string, number> | null;
}

export interface StoryboardDoc {
  schema_version: string;
  app: { package_id: string; revision: number };
  atg: { pairs: PairDoc[]; dropped_fragment_edges: number; diagnostics: string[] };
  pages: Record<string, PageDoc>;
  activity_code: Record<string, string>;
  layout_code: Record<string, string>;
  call_hierarchy: Record<string, [string, string][]>;
  components: Record<string, ComponentDoc[]>;
  icc: unknown;
  metrics: MetricsDoc;
  outcomes: Record<string, OutcomeDoc>;
  timings: Record<string, number>;
}
