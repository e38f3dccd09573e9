import { fetchHealth } from './api.js';
import { renderApp } from './form.js';

const root = document.getElementById('app');
if (root) {
  const base =
    (window as { ETHICALLY_API_BASE?: string }).ETHICALLY_API_BASE ??
    'http://127.0.0.1:8000';
  renderApp(root, { base });
  const footer = document.createElement('footer');
  footer.className = 'health-footer';
  root.append(footer);
  void fetchHealth(base).then((health) => {
    footer.textContent = health
      ? `Service online: ${health.model_id} (prompt ${health.prompt_version})`
      : 'Service status unavailable.';
  });
}
